#include "cdeal/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cdeal::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kBreakdownPivot = 1e-11;

struct Normalized {
    Vector lower;
    Vector upper;
};

Normalized validate(const LinearProgram& lp) {
    const Index n = lp.num_vars();
    auto check_block = [&](const Matrix& a, const Vector& b, const char* name) {
        if (b.size() == 0 && a.size() == 0) return;
        if (a.rows() != b.size() || a.cols() != n)
            throw ShapeError(std::string("linear program: ") + name + " block is " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " with " + std::to_string(b.size()) + " right-hand sides, " +
                             std::to_string(n) + " variables");
        if (!a.allFinite() || !b.allFinite())
            throw ShapeError(std::string("linear program: non-finite entries in ") + name);
    };
    if (n == 0) throw ShapeError("linear program without variables");
    if (!lp.objective.allFinite()) throw ShapeError("linear program: non-finite objective");
    check_block(lp.eq_matrix, lp.eq_rhs, "equality");
    check_block(lp.ub_matrix, lp.ub_rhs, "inequality");
    Normalized out{lp.lower.size() ? lp.lower : Vector::Zero(n),
                   lp.upper.size() ? lp.upper : Vector::Constant(n, kInf)};
    if (out.lower.size() != n || out.upper.size() != n)
        throw ShapeError("linear program: bound vectors must match the variable count");
    for (Index j = 0; j < n; ++j) {
        if (std::isnan(out.lower[j]) || std::isnan(out.upper[j]) || out.lower[j] == kInf ||
            out.upper[j] == -kInf)
            throw ShapeError("linear program: invalid bounds for variable " + std::to_string(j));
    }
    return out;
}

// x_j = offset_j + sum over its structural columns of sign * column value.
struct ColumnMap {
    Index original;
    double sign;
};

class Tableau {
public:
    Tableau(Matrix t, Vector rhs, std::vector<Index> basis)
        : t0_(t), b0_(rhs), t_(std::move(t)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

    Matrix& t() { return t_; }
    Vector& rhs() { return rhs_; }
    std::vector<Index>& basis() { return basis_; }
    Index rows() const { return t_.rows(); }
    Index cols() const { return t_.cols(); }

    void pivot(Index row, Index col, Vector& reduced, double& objective) {
        const double piv = t_(row, col);
        if (std::abs(piv) < kBreakdownPivot)
            throw ConditioningError("simplex pivot below 1e-11 after scaling");
        t_.row(row) /= piv;
        rhs_[row] /= piv;
        Vector factor = t_.col(col);
        factor[row] = 0.0;
        const Eigen::RowVectorXd prow = t_.row(row);
        t_.noalias() -= factor * prow;
        rhs_ -= factor * rhs_[row];
        t_.col(col).setZero();
        t_(row, col) = 1.0;
        const double dq = reduced[col];
        reduced -= dq * prow.transpose();
        reduced[col] = 0.0;
        objective += dq * rhs_[row];
        basis_[static_cast<std::size_t>(row)] = col;
        ++since_reinvert_;
    }

    // Rebuilds the tableau from the original rows and the current basis, wiping
    // out round-off accumulated by elimination.
    void reinvert() {
        since_reinvert_ = 0;
        const Index m = rows();
        if (m == 0) return;
        Matrix b(m, m);
        for (Index i = 0; i < m; ++i) b.col(i) = t0_.col(basis_[static_cast<std::size_t>(i)]);
        const Eigen::PartialPivLU<Matrix> lu(b);
        if (!(lu.rcond() > 1e-13)) return;
        t_ = lu.solve(t0_);
        rhs_ = lu.solve(b0_);
        for (Index i = 0; i < m; ++i) {
            const Index col = basis_[static_cast<std::size_t>(i)];
            t_.col(col).setZero();
            t_(i, col) = 1.0;
        }
    }

    void price(const Vector& cost, Vector& reduced, double& objective) const {
        Vector cb(rows());
        for (Index i = 0; i < rows(); ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
        reduced = cost - t_.transpose() * cb;
        for (Index i = 0; i < rows(); ++i) reduced[basis_[static_cast<std::size_t>(i)]] = 0.0;
        objective = cb.dot(rhs_);
    }

    enum class Result { optimal, unbounded };

    // Bland's rule: lowest-index improving column, lowest-index basic on ratio ties.
    // Verdicts are only returned from a freshly reinverted tableau.
    Result run(const Vector& cost, Vector& reduced, double& objective, const std::vector<char>& barred,
               long& iters, long max_iters, Index& unbounded_col) {
        constexpr long kReinvertEvery = 32;
        price(cost, reduced, objective);
        while (true) {
            if (since_reinvert_ >= kReinvertEvery) {
                reinvert();
                price(cost, reduced, objective);
            }
            Index enter = -1;
            for (Index j = 0; j < cols(); ++j) {
                if (!barred[static_cast<std::size_t>(j)] && reduced[j] < -kOptTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) {
                if (since_reinvert_ > 0) {
                    reinvert();
                    price(cost, reduced, objective);
                    continue;
                }
                return Result::optimal;
            }
            Index leave = -1;
            double best = kInf;
            for (Index i = 0; i < rows(); ++i) {
                const double a = t_(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(rhs_[i], 0.0) / a;
                if (leave < 0 || ratio < best - 1e-12 * (1.0 + std::abs(best))) {
                    best = ratio;
                    leave = i;
                } else if (std::abs(ratio - best) <= 1e-12 * (1.0 + std::abs(best)) &&
                           basis_[static_cast<std::size_t>(i)] <
                               basis_[static_cast<std::size_t>(leave)]) {
                    leave = i;
                }
            }
            if (leave < 0) {
                if (since_reinvert_ > 0) {
                    reinvert();
                    price(cost, reduced, objective);
                    continue;
                }
                unbounded_col = enter;
                return Result::unbounded;
            }
            pivot(leave, enter, reduced, objective);
            if (++iters > max_iters)
                throw ConditioningError("simplex iteration limit reached");
        }
    }

private:
    Matrix t0_;
    Vector b0_;
    Matrix t_;
    Vector rhs_;
    std::vector<Index> basis_;
    long since_reinvert_ = 0;
};

}  // namespace

const char* to_string(Status status) {
    switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    }
    return "unknown";
}

double max_violation(const LinearProgram& lp, const Vector& x) {
    const auto b = validate(lp);
    double worst = 0.0;
    if (lp.num_eq() > 0) worst = std::max(worst, (lp.eq_matrix * x - lp.eq_rhs).cwiseAbs().maxCoeff());
    if (lp.num_ub() > 0)
        worst = std::max(worst, (lp.ub_matrix * x - lp.ub_rhs).cwiseMax(0.0).maxCoeff());
    worst = std::max(worst, (b.lower - x).cwiseMax(0.0).maxCoeff());
    worst = std::max(worst, (x - b.upper).cwiseMax(0.0).maxCoeff());
    return worst;
}

LpOutcome solve(const LinearProgram& lp) {
    const auto bounds = validate(lp);
    const Index n = lp.num_vars();
    const Index m_eq = lp.num_eq();
    const Index m_ub = lp.num_ub();

    // Structural columns and bound rows.
    std::vector<ColumnMap> cols;
    Vector offset = Vector::Zero(n);
    std::vector<std::pair<Index, double>> bound_rows;  // (structural column, rhs)
    for (Index j = 0; j < n; ++j) {
        const double lo = bounds.lower[j];
        const double hi = bounds.upper[j];
        if (std::isfinite(lo)) {
            offset[j] = lo;
            cols.push_back({j, 1.0});
            if (std::isfinite(hi)) bound_rows.emplace_back(static_cast<Index>(cols.size()) - 1, hi - lo);
        } else if (std::isfinite(hi)) {
            offset[j] = hi;
            cols.push_back({j, -1.0});
        } else {
            cols.push_back({j, 1.0});
            cols.push_back({j, -1.0});
        }
    }
    const Index ns = static_cast<Index>(cols.size());
    const Index m_bound = static_cast<Index>(bound_rows.size());
    const Index m = m_eq + m_ub + m_bound;
    const Index m_le = m_ub + m_bound;

    Matrix a = Matrix::Zero(m, ns);
    Vector b(m);
    for (Index k = 0; k < ns; ++k) {
        const auto& c = cols[static_cast<std::size_t>(k)];
        if (m_eq) a.block(0, k, m_eq, 1) = c.sign * lp.eq_matrix.col(c.original);
        if (m_ub) a.block(m_eq, k, m_ub, 1) = c.sign * lp.ub_matrix.col(c.original);
    }
    if (m_eq) b.head(m_eq) = lp.eq_rhs - lp.eq_matrix * offset;
    if (m_ub) b.segment(m_eq, m_ub) = lp.ub_rhs - lp.ub_matrix * offset;
    for (Index r = 0; r < m_bound; ++r) {
        a(m_eq + m_ub + r, bound_rows[static_cast<std::size_t>(r)].first) = 1.0;
        b[m_eq + m_ub + r] = bound_rows[static_cast<std::size_t>(r)].second;
    }
    const double sense = lp.sense == Sense::maximize ? -1.0 : 1.0;
    Vector c(ns);
    for (Index k = 0; k < ns; ++k) {
        const auto& col = cols[static_cast<std::size_t>(k)];
        c[k] = sense * col.sign * lp.objective[col.original];
    }

    // Equilibrate rows then columns to unit max-abs.
    Vector row_scale = Vector::Ones(m);
    for (Index i = 0; i < m; ++i) {
        const double mx = a.row(i).cwiseAbs().maxCoeff();
        if (mx > 0.0) row_scale[i] = 1.0 / mx;
    }
    a = row_scale.asDiagonal() * a;
    b = row_scale.asDiagonal() * b;
    Vector col_scale = Vector::Ones(ns);
    for (Index k = 0; k < ns; ++k) {
        const double mx = m > 0 ? a.col(k).cwiseAbs().maxCoeff() : 0.0;
        if (mx > 0.0) col_scale[k] = 1.0 / mx;
    }
    a = a * col_scale.asDiagonal();
    c = col_scale.asDiagonal() * c;

    // Slacks for <= rows, then sign-normalize so every rhs is nonnegative.
    Vector flip = Vector::Ones(m);
    std::vector<double> slack_sign(static_cast<std::size_t>(m), 0.0);
    for (Index i = m_eq; i < m; ++i) slack_sign[static_cast<std::size_t>(i)] = 1.0;
    for (Index i = 0; i < m; ++i) {
        if (b[i] < 0.0) {
            flip[i] = -1.0;
            a.row(i) *= -1.0;
            b[i] = -b[i];
            slack_sign[static_cast<std::size_t>(i)] *= -1.0;
        }
    }
    std::vector<Index> art_rows;
    for (Index i = 0; i < m; ++i) {
        if (slack_sign[static_cast<std::size_t>(i)] != 1.0) art_rows.push_back(i);
    }
    const Index n_art = static_cast<Index>(art_rows.size());
    const Index total = ns + m_le + n_art;

    Matrix t = Matrix::Zero(m, total);
    t.leftCols(ns) = a;
    std::vector<Index> basis(static_cast<std::size_t>(m));
    std::vector<Index> init_col(static_cast<std::size_t>(m));
    for (Index i = m_eq; i < m; ++i) {
        t(i, ns + (i - m_eq)) = slack_sign[static_cast<std::size_t>(i)];
        basis[static_cast<std::size_t>(i)] = ns + (i - m_eq);
    }
    for (Index r = 0; r < n_art; ++r) {
        const Index i = art_rows[static_cast<std::size_t>(r)];
        t(i, ns + m_le + r) = 1.0;
        basis[static_cast<std::size_t>(i)] = ns + m_le + r;
    }
    init_col = basis;
    Tableau tab(std::move(t), std::move(b), std::move(basis));

    LpOutcome out;
    const long max_iters = 50L * (m + total) + 10000L;
    std::vector<char> barred(static_cast<std::size_t>(total), 0);
    Index unbounded_col = -1;

    // Phase 1.
    if (n_art > 0) {
        Vector phase1 = Vector::Zero(total);
        phase1.tail(n_art).setOnes();
        Vector reduced;
        double objective = 0.0;
        // The phase-1 objective is bounded below by zero.
        tab.run(phase1, reduced, objective, barred, out.iterations, max_iters, unbounded_col);
        double infeasibility = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (tab.basis()[static_cast<std::size_t>(i)] >= ns + m_le)
                infeasibility += std::max(tab.rhs()[i], 0.0);
        }
        const double scale = 1.0 + (m > 0 ? tab.rhs().cwiseAbs().maxCoeff() : 0.0);
        if (infeasibility > kFeasTol * scale) {
            out.status = Status::infeasible;
            return out;
        }
        // Drive zero-level artificials out of the basis where possible.
        Vector dummy = Vector::Zero(total);
        double dummy_obj = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (tab.basis()[static_cast<std::size_t>(i)] < ns + m_le) continue;
            tab.rhs()[i] = 0.0;
            Index best = -1;
            double largest = kPivotTol;
            for (Index j = 0; j < ns + m_le; ++j) {
                if (std::abs(tab.t()(i, j)) > largest) {
                    largest = std::abs(tab.t()(i, j));
                    best = j;
                }
            }
            if (best >= 0) tab.pivot(i, best, dummy, dummy_obj);
        }
        for (Index r = 0; r < n_art; ++r) barred[static_cast<std::size_t>(ns + m_le + r)] = 1;
    }

    // Phase 2.
    Vector cost = Vector::Zero(total);
    cost.head(ns) = c;
    Vector reduced;
    double objective = 0.0;
    const auto result = tab.run(cost, reduced, objective, barred, out.iterations, max_iters, unbounded_col);
    Vector cb(m);

    auto to_original = [&](const Vector& structural) {
        Vector x = Vector::Zero(n);
        for (Index k = 0; k < ns; ++k) {
            const auto& col = cols[static_cast<std::size_t>(k)];
            x[col.original] += col.sign * col_scale[k] * structural[k];
        }
        return x;
    };

    if (result == Tableau::Result::unbounded) {
        Vector dir = Vector::Zero(total);
        dir[unbounded_col] = 1.0;
        for (Index i = 0; i < m; ++i) dir[tab.basis()[static_cast<std::size_t>(i)]] = -tab.t()(i, unbounded_col);
        out.status = Status::unbounded;
        out.ray = to_original(dir.head(ns));
        return out;
    }

    Vector z = Vector::Zero(total);
    for (Index i = 0; i < m; ++i) z[tab.basis()[static_cast<std::size_t>(i)]] = std::max(tab.rhs()[i], 0.0);
    out.x = to_original(z.head(ns)) + offset;
    out.objective = lp.objective.dot(out.x);
    out.status = Status::optimal;

    // Simplex multipliers c_B' B^{-1}; column i of B^{-1} is the current image
    // of the unit column that started basic in row i.
    for (Index i = 0; i < m; ++i) cb[i] = cost[tab.basis()[static_cast<std::size_t>(i)]];
    Vector y(m);
    for (Index i = 0; i < m; ++i) y[i] = cb.dot(tab.t().col(init_col[static_cast<std::size_t>(i)]));
    y = sense * (y.array() * flip.array() * row_scale.array()).matrix();
    out.eq_duals = y.head(m_eq);
    out.ub_duals = y.segment(m_eq, m_ub);

    const double viol = max_violation(lp, out.x);
    double scale = 1.0;
    if (m_eq) scale = std::max(scale, lp.eq_rhs.cwiseAbs().maxCoeff());
    if (m_ub) scale = std::max(scale, lp.ub_rhs.cwiseAbs().maxCoeff());
    if (viol > 1e-6 * scale)
        throw ConditioningError("simplex solution violates constraints by " + std::to_string(viol));
    return out;
}

namespace {

enum class SignType { nonneg, nonpos, free, fixed_zero };

struct DualPlan {
    LinearProgram dual;
    // For each primal variable: dual row block (0 = eq, 1 = ub) and index, or -1.
    std::vector<std::pair<int, Index>> var_row;
    std::vector<double> var_row_sign;
    std::vector<SignType> types;
    Index extra_ub = 0;  // bound rows appended after the original ub rows
};

DualPlan build_dual(const LinearProgram& lp) {
    const auto bounds = validate(lp);
    const Index n = lp.num_vars();
    const Index m_eq = lp.num_eq();

    DualPlan plan;
    plan.types.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<Index, double>> extra;  // (variable, +1 for x<=u / -1 for x>=l) with rhs
    std::vector<double> extra_rhs;
    for (Index j = 0; j < n; ++j) {
        const double lo = bounds.lower[j];
        const double hi = bounds.upper[j];
        SignType type;
        if (lo == 0.0 && hi == 0.0) {
            type = SignType::fixed_zero;
        } else if (lo >= 0.0) {
            type = SignType::nonneg;
            if (lo > 0.0) { extra.emplace_back(j, -1.0); extra_rhs.push_back(-lo); }
            if (std::isfinite(hi)) { extra.emplace_back(j, 1.0); extra_rhs.push_back(hi); }
        } else if (hi <= 0.0) {
            type = SignType::nonpos;
            if (hi < 0.0) { extra.emplace_back(j, 1.0); extra_rhs.push_back(hi); }
            if (std::isfinite(lo)) { extra.emplace_back(j, -1.0); extra_rhs.push_back(-lo); }
        } else {
            type = SignType::free;
            if (std::isfinite(lo)) { extra.emplace_back(j, -1.0); extra_rhs.push_back(-lo); }
            if (std::isfinite(hi)) { extra.emplace_back(j, 1.0); extra_rhs.push_back(hi); }
        }
        plan.types[static_cast<std::size_t>(j)] = type;
    }
    const Index m_ub0 = lp.num_ub();
    const Index m_ub = m_ub0 + static_cast<Index>(extra.size());
    plan.extra_ub = static_cast<Index>(extra.size());
    Matrix aub = Matrix::Zero(m_ub, n);
    Vector bub(m_ub);
    if (m_ub0) {
        aub.topRows(m_ub0) = lp.ub_matrix;
        bub.head(m_ub0) = lp.ub_rhs;
    }
    for (std::size_t r = 0; r < extra.size(); ++r) {
        aub(m_ub0 + static_cast<Index>(r), extra[r].first) = extra[r].second;
        bub[m_ub0 + static_cast<Index>(r)] = extra_rhs[r];
    }

    // Dual variables: [y (eq, free); w (ub, sign by sense)].
    const bool primal_min = lp.sense == Sense::minimize;
    const Index nd = m_eq + m_ub;
    LinearProgram& d = plan.dual;
    d.sense = primal_min ? Sense::maximize : Sense::minimize;
    d.objective.resize(nd);
    if (m_eq) d.objective.head(m_eq) = lp.eq_rhs;
    if (m_ub) d.objective.tail(m_ub) = bub;
    d.lower = Vector::Constant(nd, -kInf);
    d.upper = Vector::Constant(nd, kInf);
    if (m_ub) {
        if (primal_min)
            d.upper.tail(m_ub).setZero();
        else
            d.lower.tail(m_ub).setZero();
    }

    // Column j of the primal becomes a dual row a_j'(y, w) {<=, >=, =} c_j.
    std::vector<Index> le_rows;
    std::vector<double> le_signs;
    std::vector<Index> eq_rows;
    plan.var_row.assign(static_cast<std::size_t>(n), {-1, -1});
    plan.var_row_sign.assign(static_cast<std::size_t>(n), 1.0);
    for (Index j = 0; j < n; ++j) {
        const auto type = plan.types[static_cast<std::size_t>(j)];
        if (type == SignType::fixed_zero) continue;
        if (type == SignType::free) {
            plan.var_row[static_cast<std::size_t>(j)] = {0, static_cast<Index>(eq_rows.size())};
            eq_rows.push_back(j);
            continue;
        }
        // min & x>=0 -> "<="; min & x<=0 -> ">="; max flips both.
        const bool le = (type == SignType::nonneg) == primal_min;
        const double sign = le ? 1.0 : -1.0;
        plan.var_row[static_cast<std::size_t>(j)] = {1, static_cast<Index>(le_rows.size())};
        plan.var_row_sign[static_cast<std::size_t>(j)] = sign;
        le_rows.push_back(j);
        le_signs.push_back(sign);
    }
    auto column = [&](Index j) {
        Vector col(nd);
        if (m_eq) col.head(m_eq) = lp.eq_matrix.col(j);
        if (m_ub) col.tail(m_ub) = aub.col(j);
        return col;
    };
    d.eq_matrix.resize(static_cast<Index>(eq_rows.size()), nd);
    d.eq_rhs.resize(static_cast<Index>(eq_rows.size()));
    for (std::size_t r = 0; r < eq_rows.size(); ++r) {
        d.eq_matrix.row(static_cast<Index>(r)) = column(eq_rows[r]).transpose();
        d.eq_rhs[static_cast<Index>(r)] = lp.objective[eq_rows[r]];
    }
    d.ub_matrix.resize(static_cast<Index>(le_rows.size()), nd);
    d.ub_rhs.resize(static_cast<Index>(le_rows.size()));
    for (std::size_t r = 0; r < le_rows.size(); ++r) {
        d.ub_matrix.row(static_cast<Index>(r)) = le_signs[r] * column(le_rows[r]).transpose();
        d.ub_rhs[static_cast<Index>(r)] = le_signs[r] * lp.objective[le_rows[r]];
    }
    if (nd == 0) {
        // No primal rows: the dual is a feasibility problem in zero variables.
        // Represent it with a single fixed variable so the solver has a column.
        d.objective = Vector::Zero(1);
        d.lower = Vector::Zero(1);
        d.upper = Vector::Zero(1);
        d.eq_matrix = Matrix::Zero(static_cast<Index>(eq_rows.size()), 1);
        d.ub_matrix = Matrix::Zero(static_cast<Index>(le_rows.size()), 1);
    }
    return plan;
}

}  // namespace

LinearProgram dual_of(const LinearProgram& program) { return build_dual(program).dual; }

LpOutcome solve_via_dual(const LinearProgram& program) {
    const DualPlan plan = build_dual(program);
    const LpOutcome dual = solve(plan.dual);
    LpOutcome out;
    out.iterations = dual.iterations;
    if (dual.status == Status::unbounded) {
        out.status = Status::infeasible;
        return out;
    }
    if (dual.status == Status::infeasible) {
        out.status = Status::unbounded;
        return out;
    }
    const Index n = program.num_vars();
    out.status = Status::optimal;
    out.x = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
        const auto [block, row] = plan.var_row[static_cast<std::size_t>(j)];
        if (block == 0) out.x[j] = dual.eq_duals[row];
        if (block == 1) out.x[j] = plan.var_row_sign[static_cast<std::size_t>(j)] * dual.ub_duals[row];
    }
    out.objective = dual.objective;
    const Index m_eq = program.num_eq();
    const Index m_ub = program.num_ub();
    if (plan.dual.objective.size() == m_eq + m_ub + plan.extra_ub) {
        out.eq_duals = dual.x.head(m_eq);
        out.ub_duals = dual.x.segment(m_eq, m_ub);
    } else {
        out.eq_duals = Vector::Zero(m_eq);
        out.ub_duals = Vector::Zero(m_ub);
    }
    return out;
}

}  // namespace cdeal::lp
