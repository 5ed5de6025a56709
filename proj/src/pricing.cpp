#include "cdeal/pricing.hpp"

#include "cdeal/algebra.hpp"
#include "cdeal/lp.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace cdeal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_group_spaces(const MarketModel& market, const std::vector<ValuationGroup>& groups) {
    if (groups.empty()) throw DomainError("at least one valuation group is required");
    for (const auto& g : groups) {
        if (g.is_wvar()) continue;
        for (const auto& q : g.measures()) {
            if (q.size() != market.space()->size() || !(*q.space() == *market.space()))
                throw ShapeError("valuation measure does not live on the market's scenario space");
        }
    }
}

void check_claim(const MarketModel& market, const RandomVariable& claim) {
    if (claim.size() != market.space()->size() || !(*claim.space() == *market.space()))
        throw ShapeError("claim does not live on the market's scenario space");
}

bool all_wvar(const std::vector<ValuationGroup>& groups) {
    return std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.is_wvar(); });
}

std::vector<WeightingMeasure> wvar_measures(const std::vector<ValuationGroup>& groups) {
    std::vector<WeightingMeasure> out;
    for (const auto& g : groups) {
        if (!g.is_wvar()) throw DomainError("operation needs Weighted V@R groups only");
        out.push_back(g.measure());
    }
    return out;
}

struct HedgeSolution {
    double value = 0.0;
    Vector hedge;
};

// min over lower <= h <= upper of max_n rho_{mu^n}(X h - F), using
// rho_lambda(Y) = min_c {-c + E(c - Y)^+ / lambda}. Atoms at level 1 enter
// linearly as -E Y. Returns nullopt when the program is unbounded.
std::optional<HedgeSolution> minimize_risk(const Matrix& payoffs, const Vector& probs,
                                           const Vector& lower, const Vector& upper,
                                           const std::vector<WeightingMeasure>& measures,
                                           const Vector& claim) {
    const Index t_count = payoffs.rows();
    const Index d = payoffs.cols();
    const bool epigraph = measures.size() > 1;

    Index nvars = d + (epigraph ? 1 : 0);
    Index nrows = 0;
    for (const auto& mu : measures) {
        for (const auto& a : mu.atoms()) {
            if (a.level < 1.0) {
                nvars += 1 + t_count;
                nrows += t_count;
            }
        }
    }
    const Index n_epi = epigraph ? static_cast<Index>(measures.size()) : 0;

    lp::LinearProgram prog;
    prog.sense = lp::Sense::minimize;
    prog.objective = Vector::Zero(nvars);
    prog.ub_matrix = Matrix::Zero(nrows + n_epi, nvars);
    prog.ub_rhs = Vector::Zero(nrows + n_epi);
    prog.lower = Vector::Constant(nvars, -kInf);
    prog.upper = Vector::Constant(nvars, kInf);
    prog.lower.head(d) = lower;
    prog.upper.head(d) = upper;
    const Index t_var = d;
    if (epigraph) prog.objective[t_var] = 1.0;

    // Means below the cancellation error of their own sum are zero; left in,
    // equilibration would blow them up into spurious free lunches.
    Vector mean_payoff = payoffs.transpose() * probs;
    const Vector abs_mean = payoffs.cwiseAbs().transpose() * probs;
    for (Index i = 0; i < d; ++i) {
        if (std::abs(mean_payoff[i]) <= 64.0 * std::numeric_limits<double>::epsilon() * abs_mean[i])
            mean_payoff[i] = 0.0;
    }
    const double mean_claim = probs.dot(claim);
    Index var = d + (epigraph ? 1 : 0);
    Index row = 0;
    double offset = 0.0;
    for (std::size_t n = 0; n < measures.size(); ++n) {
        // Group risk = coef' x + constant.
        Vector coef = Vector::Zero(nvars);
        double constant = 0.0;
        for (const auto& a : measures[n].atoms()) {
            if (a.level >= 1.0) {
                coef.head(d) -= a.weight * mean_payoff;
                constant += a.weight * mean_claim;
                continue;
            }
            const Index c_var = var++;
            coef[c_var] -= a.weight;
            for (Index j = 0; j < t_count; ++j) {
                const Index u_var = var++;
                prog.lower[u_var] = 0.0;
                coef[u_var] += a.weight * probs[j] / a.level;
                // c - u_j - (X h)_j <= -F_j
                prog.ub_matrix(row, c_var) = 1.0;
                prog.ub_matrix(row, u_var) = -1.0;
                prog.ub_matrix.block(row, 0, 1, d) = -payoffs.row(j);
                prog.ub_rhs[row] = -claim[j];
                ++row;
            }
        }
        if (epigraph) {
            const Index r = nrows + static_cast<Index>(n);
            prog.ub_matrix.row(r) = coef.transpose();
            prog.ub_matrix(r, t_var) -= 1.0;
            prog.ub_rhs[r] = -constant;
        } else {
            prog.objective += coef;
            offset += constant;
        }
    }
    // No assets and only level-1 atoms: the risk is the constant.
    if (nvars == 0) return HedgeSolution{offset, Vector::Zero(0)};
    const auto out = lp::solve(prog);
    if (out.status == lp::Status::unbounded) return std::nullopt;
    if (out.status != lp::Status::optimal)
        throw ConditioningError("risk minimization reported an infeasible program");
    return HedgeSolution{out.objective + offset, out.x.head(d)};
}

void bound_vectors(const MarketModel& market, double volume, Vector& lower, Vector& upper) {
    const Index d = market.num_assets();
    lower.resize(d);
    upper.resize(d);
    for (Index i = 0; i < d; ++i) {
        lower[i] = market.bounds()[static_cast<std::size_t>(i)].lower / volume;
        upper[i] = market.bounds()[static_cast<std::size_t>(i)].upper / volume;
    }
}

std::vector<WeightingMeasure> pricing_measures(const std::vector<ValuationGroup>& groups,
                                               PricingMode mode) {
    auto measures = wvar_measures(groups);
    if (mode == PricingMode::conv) return {convolve_wvar(measures)};
    return measures;
}

HedgeSolution primal_bound(const MarketModel& market, const std::vector<WeightingMeasure>& measures,
                           const Vector& claim, double volume = 1.0) {
    Vector lower;
    Vector upper;
    bound_vectors(market, volume, lower, upper);
    auto sol = minimize_risk(market.payoffs(), market.space()->probs(), lower, upper, measures, claim);
    if (!sol) throw NsaoViolation("pricing program is unbounded: the market admits a strictly acceptable opportunity");
    return *sol;
}

// Kind of the risk-neutral row of each asset in the measure program.
enum class RnKind { equality, nonpositive, nonnegative, none };

RnKind rn_kind(const PositionBounds& b) {
    const bool up = b.upper > 0.0;
    const bool down = b.lower < 0.0;
    if (up && down) return RnKind::equality;
    if (up) return RnKind::nonpositive;
    if (down) return RnKind::nonnegative;
    return RnKind::none;
}

DualResult measure_program(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                           const Vector& claim, Side side, PricingMode mode) {
    if (!market.is_cone()) throw DomainError("measure program needs a cone of positions");
    const Index t_count = market.space()->size();
    const Index d = market.num_assets();
    const Index n_groups = static_cast<Index>(groups.size());
    const bool is_max = mode == PricingMode::max;
    const Vector& p = market.space()->probs();
    const Matrix x = market.payoffs();

    bool any_wvar = false;
    for (const auto& g : groups) any_wvar = any_wvar || g.is_wvar();
    if (any_wvar && t_count > kDualScenarioCap)
        throw SizeError("subset-constraint dual needs at most " + std::to_string(kDualScenarioCap) +
                        " scenarios, got " + std::to_string(t_count));

    // Variable layout.
    const Index q_block = is_max ? n_groups * t_count : t_count;
    const Index theta0 = q_block;
    Index nvars = q_block + (is_max ? n_groups : 0);
    std::vector<Index> a_offset(static_cast<std::size_t>(n_groups), -1);
    for (Index n = 0; n < n_groups; ++n) {
        const auto& g = groups[static_cast<std::size_t>(n)];
        if (!g.is_wvar()) {
            a_offset[static_cast<std::size_t>(n)] = nvars;
            nvars += static_cast<Index>(g.measures().size());
        }
    }
    auto r_var = [&](Index n, Index j) { return is_max ? n * t_count + j : j; };

    std::vector<Eigen::RowVectorXd> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<Eigen::RowVectorXd> ub_rows;
    std::vector<double> ub_rhs;
    auto blank = [&] { return Eigen::RowVectorXd::Zero(nvars).eval(); };

    if (is_max) {
        auto row = blank();
        row.segment(theta0, n_groups).setOnes();
        eq_rows.push_back(row);
        eq_rhs.push_back(1.0);
        for (Index n = 0; n < n_groups; ++n) {
            auto r = blank();
            r.segment(n * t_count, t_count).setOnes();
            r[theta0 + n] = -1.0;
            eq_rows.push_back(r);
            eq_rhs.push_back(0.0);
        }
    } else {
        auto row = blank();
        row.head(t_count).setOnes();
        eq_rows.push_back(row);
        eq_rhs.push_back(1.0);
    }

    // Risk-neutral rows, E_q X^i against the admissible directions.
    struct RnRow {
        Index asset;
        bool equality;
        Index position;
        double sign;
    };
    std::vector<RnRow> rn_rows;
    for (Index i = 0; i < d; ++i) {
        const auto kind = rn_kind(market.bounds()[static_cast<std::size_t>(i)]);
        if (kind == RnKind::none) continue;
        auto row = blank();
        for (Index n = 0; n < (is_max ? n_groups : 1); ++n)
            for (Index j = 0; j < t_count; ++j) row[r_var(n, j)] = x(j, i);
        if (kind == RnKind::equality) {
            rn_rows.push_back({i, true, static_cast<Index>(eq_rows.size()), 1.0});
            eq_rows.push_back(row);
            eq_rhs.push_back(0.0);
        } else {
            const double s = kind == RnKind::nonpositive ? 1.0 : -1.0;
            rn_rows.push_back({i, false, static_cast<Index>(ub_rows.size()), s});
            ub_rows.push_back(s * row);
            ub_rhs.push_back(0.0);
        }
    }

    for (Index n = 0; n < n_groups; ++n) {
        const auto& g = groups[static_cast<std::size_t>(n)];
        const Index rn = is_max ? n : 0;
        if (!g.is_wvar()) {
            const auto& qs = g.measures();
            const Index off = a_offset[static_cast<std::size_t>(n)];
            for (Index j = 0; j < t_count; ++j) {
                auto row = blank();
                row[r_var(rn, j)] = 1.0;
                for (std::size_t k = 0; k < qs.size(); ++k) row[off + static_cast<Index>(k)] = -qs[k][j];
                eq_rows.push_back(row);
                eq_rhs.push_back(0.0);
            }
            auto row = blank();
            row.segment(off, static_cast<Index>(qs.size())).setOnes();
            if (is_max) row[theta0 + n] = -1.0;
            eq_rows.push_back(row);
            eq_rhs.push_back(is_max ? 0.0 : 1.0);
            continue;
        }
        const auto psi = distortion(g.measure());
        const std::uint32_t full = (std::uint32_t{1} << t_count) - 1;
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            double pa = 0.0;
            for (Index j = 0; j < t_count; ++j)
                if (mask & (std::uint32_t{1} << j)) pa += p[j];
            const double cap = psi(pa);
            // q(A) <= q(Omega) = 1 already covers the cap 1.
            if (cap >= 1.0) continue;
            auto row = blank();
            for (Index j = 0; j < t_count; ++j)
                if (mask & (std::uint32_t{1} << j)) row[r_var(rn, j)] = 1.0;
            if (is_max) {
                row[theta0 + n] = -cap;
                ub_rhs.push_back(0.0);
            } else {
                ub_rhs.push_back(cap);
            }
            ub_rows.push_back(row);
        }
    }

    lp::LinearProgram prog;
    prog.sense = side == Side::upper ? lp::Sense::maximize : lp::Sense::minimize;
    prog.objective = Vector::Zero(nvars);
    for (Index n = 0; n < (is_max ? n_groups : 1); ++n)
        for (Index j = 0; j < t_count; ++j) prog.objective[r_var(n, j)] = claim[j];
    prog.eq_matrix.resize(static_cast<Index>(eq_rows.size()), nvars);
    prog.eq_rhs.resize(static_cast<Index>(eq_rows.size()));
    for (std::size_t r = 0; r < eq_rows.size(); ++r) {
        prog.eq_matrix.row(static_cast<Index>(r)) = eq_rows[r];
        prog.eq_rhs[static_cast<Index>(r)] = eq_rhs[r];
    }
    prog.ub_matrix.resize(static_cast<Index>(ub_rows.size()), nvars);
    prog.ub_rhs.resize(static_cast<Index>(ub_rows.size()));
    for (std::size_t r = 0; r < ub_rows.size(); ++r) {
        prog.ub_matrix.row(static_cast<Index>(r)) = ub_rows[r];
        prog.ub_rhs[static_cast<Index>(r)] = ub_rhs[r];
    }

    const bool tall = prog.num_eq() + prog.num_ub() > 2 * nvars;
    const auto out = tall ? lp::solve_via_dual(prog) : lp::solve(prog);

    DualResult res;
    if (out.status == lp::Status::infeasible) return res;
    if (out.status == lp::Status::unbounded)
        throw ConditioningError("measure program over a compact set reported unbounded");
    res.feasible = true;
    res.value = out.objective;
    res.q = Vector::Zero(t_count);
    for (Index n = 0; n < (is_max ? n_groups : 1); ++n)
        for (Index j = 0; j < t_count; ++j) res.q[j] += out.x[r_var(n, j)];
    res.hedge = Vector::Zero(d);
    const double side_sign = side == Side::upper ? 1.0 : -1.0;
    for (const auto& rr : rn_rows) {
        const double dual = rr.equality ? out.eq_duals[rr.position] : out.ub_duals[rr.position];
        res.hedge[rr.asset] = side_sign * rr.sign * dual;
    }
    return res;
}

PriceInterval price_interval_impl(const MarketModel& market,
                                  const std::vector<ValuationGroup>& groups,
                                  const RandomVariable& claim, PricingMode mode) {
    check_group_spaces(market, groups);
    check_claim(market, claim);
    if (!market.is_cone()) throw DomainError("price intervals need a cone of positions; use liquidity curves for boxes");
    PriceInterval out;
    if (all_wvar(groups)) {
        const auto measures = pricing_measures(groups, mode);
        const auto up = primal_bound(market, measures, claim.values());
        const auto down = primal_bound(market, measures, -claim.values());
        out.upper = up.value;
        out.hedge_upper = up.hedge;
        out.lower = -down.value;
        out.hedge_lower = down.hedge;
        return out;
    }
    const auto up = measure_program(market, groups, claim.values(), Side::upper, mode);
    if (!up.feasible)
        throw NsaoViolation("no valuation measure is risk-neutral: the market admits a strictly acceptable opportunity");
    const auto down = measure_program(market, groups, claim.values(), Side::lower, mode);
    out.upper = up.value;
    out.hedge_upper = up.hedge;
    out.lower = down.value;
    out.hedge_lower = down.hedge;
    return out;
}

}  // namespace

MarketModel::MarketModel(SpacePtr space, std::vector<std::string> names,
                         std::vector<RandomVariable> assets, std::vector<PositionBounds> bounds)
    : space_(std::move(space)), names_(std::move(names)), assets_(std::move(assets)), bounds_(std::move(bounds)) {
    if (!space_) throw ShapeError("market needs a scenario space");
    if (names_.size() != assets_.size() || bounds_.size() != assets_.size())
        throw ShapeError("market names, assets and bounds differ in length");
    for (std::size_t i = 0; i < assets_.size(); ++i) {
        if (assets_[i].size() != space_->size() || !(*assets_[i].space() == *space_))
            throw ShapeError("asset '" + names_[i] + "' does not live on the market's scenario space");
        const auto& b = bounds_[i];
        if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > 0.0 || b.upper < 0.0)
            throw DomainError("position bounds of '" + names_[i] + "' must satisfy lower <= 0 <= upper");
    }
}

MarketModel MarketModel::cone(SpacePtr space, std::vector<std::string> names,
                              std::vector<RandomVariable> assets) {
    std::vector<PositionBounds> bounds(assets.size());
    return MarketModel(std::move(space), std::move(names), std::move(assets), std::move(bounds));
}

MarketModel MarketModel::empty(SpacePtr space) { return MarketModel(std::move(space), {}, {}, {}); }

bool MarketModel::is_cone() const {
    return std::all_of(bounds_.begin(), bounds_.end(), [](const PositionBounds& b) {
        return (b.lower == 0.0 || std::isinf(b.lower)) && (b.upper == 0.0 || std::isinf(b.upper));
    });
}

Matrix MarketModel::payoffs() const {
    Matrix x(space_->size(), num_assets());
    for (Index i = 0; i < num_assets(); ++i) x.col(i) = assets_[static_cast<std::size_t>(i)].values();
    return x;
}

RandomVariable MarketModel::portfolio(const Vector& positions) const {
    if (positions.size() != num_assets()) throw ShapeError("position vector length differs from asset count");
    return RandomVariable(space_, payoffs() * positions);
}

ValuationGroup ValuationGroup::wvar(WeightingMeasure mu) { return ValuationGroup(std::move(mu)); }

ValuationGroup ValuationGroup::explicit_measures(std::vector<Measure> measures) {
    if (measures.empty()) throw DomainError("explicit valuation group needs at least one measure");
    for (const auto& q : measures) {
        if (!(*q.space() == *measures.front().space()))
            throw ShapeError("explicit valuation measures live on different scenario spaces");
    }
    return ValuationGroup(std::move(measures));
}

NsaoReport nsao_check(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                      PricingMode mode) {
    check_group_spaces(market, groups);
    if (!market.is_cone()) throw DomainError("no-arbitrage check needs a cone of positions");
    NsaoReport report;
    const Vector zero = Vector::Zero(market.space()->size());
    if (all_wvar(groups)) {
        const auto measures = pricing_measures(groups, mode);
        Vector lower;
        Vector upper;
        bound_vectors(market, 1.0, lower, upper);
        const Matrix x = market.payoffs();
        const Vector& p = market.space()->probs();
        if (minimize_risk(x, p, lower, upper, measures, zero)) return report;
        // Normalized certificate: the most acceptable trade with |h_i| <= 1.
        lower = lower.cwiseMax(-1.0);
        upper = upper.cwiseMin(1.0);
        const auto best = minimize_risk(x, p, lower, upper, measures, zero);
        report.holds = false;
        report.hedge = best->hedge;
        report.hedge_risk = best->value;
        report.detail = "strictly acceptable trade found";
        return report;
    }
    const auto res = measure_program(market, groups, zero, Side::upper, mode);
    if (res.feasible) return report;
    report.holds = false;
    report.hedge = Vector::Zero(0);
    report.detail = "no valuation measure is risk-neutral";
    return report;
}

PriceInterval price_interval_conv(const MarketModel& market,
                                  const std::vector<ValuationGroup>& groups,
                                  const RandomVariable& claim) {
    return price_interval_impl(market, groups, claim, PricingMode::conv);
}

PriceInterval price_interval_max(const MarketModel& market,
                                 const std::vector<ValuationGroup>& groups,
                                 const RandomVariable& claim) {
    return price_interval_impl(market, groups, claim, PricingMode::max);
}

PriceInterval price_interval(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                             const RandomVariable& claim, PricingMode mode) {
    return price_interval_impl(market, groups, claim, mode);
}

DualResult dual_bruteforce(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                           const RandomVariable& claim, Side side, PricingMode mode) {
    check_group_spaces(market, groups);
    check_claim(market, claim);
    if (market.space()->size() > kDualScenarioCap)
        throw SizeError("subset-constraint dual needs at most " + std::to_string(kDualScenarioCap) +
                        " scenarios, got " + std::to_string(market.space()->size()));
    return measure_program(market, groups, claim.values(), side, mode);
}

double PiecewiseLinear::operator()(double x) const {
    if (xs.empty()) return 0.0;
    if (x <= xs.front()) return ys.front() + left_slope * (x - xs.front());
    if (x >= xs.back()) return ys.back() + right_slope * (x - xs.back());
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[k - 1];
    const double x1 = xs[k];
    const double w = (x - x0) / (x1 - x0);
    return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

std::vector<Tranche> tranche_split(const std::vector<WeightingMeasure>& measures,
                                   const RandomVariable& residual) {
    if (measures.empty()) throw DomainError("tranche split needs at least one group");
    const std::size_t n_groups = measures.size();
    std::vector<DistortionFunction> psis;
    for (const auto& mu : measures) psis.push_back(distortion(mu));
    const auto psi_min = pointwise_min(psis);

    std::vector<double> grid = psi_min.xs();
    for (const auto& psi : psis) grid.insert(grid.end(), psi.xs().begin(), psi.xs().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return b - a <= 1e-14; }),
               grid.end());
    grid.front() = 0.0;
    grid.back() = 1.0;

    // Owner of each cell (grid[c], grid[c+1]]: lowest index active on the whole cell.
    std::vector<std::size_t> owner(grid.size() - 1, 0);
    for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
        const double a = grid[c];
        const double b = grid[c + 1];
        const double mid = 0.5 * (a + b);
        std::size_t chosen = n_groups;
        for (std::size_t n = 0; n < n_groups && chosen == n_groups; ++n) {
            const auto& psi = psis[n];
            const bool active = std::abs(psi(a) - psi_min(a)) <= 1e-12 &&
                                std::abs(psi(b) - psi_min(b)) <= 1e-12 &&
                                std::abs(psi(mid) - psi_min(mid)) <= 1e-12;
            if (active) chosen = n;
        }
        if (chosen == n_groups) {
            // Not reachable for exact knots; fall back to the smallest value at the midpoint.
            double best = kInf;
            for (std::size_t n = 0; n < n_groups; ++n) {
                if (psis[n](mid) < best - 1e-15) {
                    best = psis[n](mid);
                    chosen = n;
                }
            }
        }
        owner[c] = chosen;
    }
    auto owner_at = [&](double z) {
        const auto it = std::lower_bound(grid.begin() + 1, grid.end(), z - 1e-14);
        std::size_t c = static_cast<std::size_t>(it - grid.begin());
        c = c == 0 ? 0 : c - 1;
        return owner[std::min(c, owner.size() - 1)];
    };

    // CDF of the residual.
    const Vector& values = residual.values();
    const Vector& probs = residual.space()->probs();
    const auto order = ascending_order(values);
    std::vector<double> levels;
    std::vector<double> cdf;
    double acc = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Index j = order[k];
        acc += probs[j];
        if (!levels.empty() && values[j] == levels.back()) {
            cdf.back() = acc;
        } else {
            levels.push_back(values[j]);
            cdf.push_back(acc);
        }
    }
    cdf.back() = 1.0;

    std::vector<Tranche> out(n_groups);
    for (std::size_t c = 0; c < owner.size(); ++c) {
        auto& iv = out[owner[c]].intervals;
        if (!iv.empty() && iv.back().second == grid[c])
            iv.back().second = grid[c + 1];
        else
            iv.emplace_back(grid[c], grid[c + 1]);
    }
    for (std::size_t n = 0; n < n_groups; ++n) {
        auto& tr = out[n];
        auto slope = [&](double z) { return owner_at(z) == n ? 1.0 : 0.0; };
        PiecewiseLinear f;
        f.xs = levels;
        f.ys.assign(levels.size(), 0.0);
        for (std::size_t t = 1; t < levels.size(); ++t)
            f.ys[t] = f.ys[t - 1] + (levels[t] - levels[t - 1]) * slope(cdf[t - 1]);
        f.left_slope = slope(0.0);
        f.right_slope = slope(1.0);
        const double at_zero = f(0.0);
        for (double& y : f.ys) y -= at_zero;
        tr.split = std::move(f);

        tr.raw.resize(values.size());
        for (Index j = 0; j < values.size(); ++j) tr.raw[j] = tr.split(values[j]);
        tr.shift = rho_wvar(measures[n], RandomVariable(residual.space(), tr.raw));
        tr.payoff = tr.raw.array() + tr.shift;
        tr.risk = rho_wvar(measures[n], RandomVariable(residual.space(), tr.payoff));
    }
    return out;
}

TranchePlan superrep_split(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                           const RandomVariable& claim) {
    check_group_spaces(market, groups);
    check_claim(market, claim);
    const auto measures = wvar_measures(groups);
    if (!market.is_cone()) throw DomainError("superreplication needs a cone of positions");
    const auto up = primal_bound(market, {convolve_wvar(measures)}, claim.values());
    TranchePlan plan;
    plan.upper_price = up.value;
    plan.hedge = up.hedge;
    plan.residual = market.payoffs() * up.hedge - claim.values();
    plan.residual.array() += up.value;
    plan.tranches = tranche_split(measures, RandomVariable(market.space(), plan.residual));
    return plan;
}

std::vector<LiquidityPoint> liquidity_curve(const MarketModel& market,
                                            const std::vector<ValuationGroup>& groups,
                                            const RandomVariable& claim,
                                            const std::vector<double>& volumes, int threads) {
    check_group_spaces(market, groups);
    check_claim(market, claim);
    for (double v : volumes) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("trade volumes must be positive and finite");
    }
    const std::vector<WeightingMeasure> measures{convolve_wvar(wvar_measures(groups))};

    std::vector<LiquidityPoint> curve(volumes.size());
    std::vector<std::exception_ptr> errors(volumes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < volumes.size(); k = next++) {
            try {
                const double v = volumes[k];
                const auto up = primal_bound(market, measures, claim.values(), v);
                const auto down = primal_bound(market, measures, -claim.values(), v);
                curve[k] = {v, up.value, -down.value};
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(volumes.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return curve;
}

Json price_interval_to_json(const PriceInterval& interval) {
    Json j;
    j["interval"] = Json::array({round12(interval.lower), round12(interval.upper)});
    j["hedge_upper"] = json_array(interval.hedge_upper);
    j["hedge_lower"] = json_array(interval.hedge_lower);
    return j;
}

Json tranche_plan_to_json(const TranchePlan& plan) {
    Json j;
    j["upper_price"] = round12(plan.upper_price);
    j["hedge"] = json_array(plan.hedge);
    j["residual"] = json_array(plan.residual);
    Json groups = Json::array();
    for (const auto& tr : plan.tranches) {
        Json g;
        Json iv = Json::array();
        for (const auto& [a, b] : tr.intervals) iv.push_back(Json::array({round12(a), round12(b)}));
        g["intervals"] = iv;
        Json bp = Json::array();
        for (std::size_t k = 0; k < tr.split.xs.size(); ++k)
            bp.push_back(Json::array({round12(tr.split.xs[k]), round12(tr.split.ys[k])}));
        g["breakpoints"] = bp;
        g["left_slope"] = round12(tr.split.left_slope);
        g["right_slope"] = round12(tr.split.right_slope);
        g["shift"] = round12(tr.shift);
        g["raw"] = json_array(tr.raw);
        g["tranche"] = json_array(tr.payoff);
        g["risk"] = round12(tr.risk);
        groups.push_back(g);
    }
    j["groups"] = groups;
    return j;
}

std::string liquidity_to_csv(const std::vector<LiquidityPoint>& curve) {
    std::ostringstream os;
    os << "v,upper,lower\n";
    for (const auto& pt : curve)
        os << format_number(pt.volume) << ',' << format_number(pt.upper) << ',' << format_number(pt.lower) << '\n';
    return os.str();
}

}  // namespace cdeal
