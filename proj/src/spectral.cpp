#include "cdeal/spectral.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>

namespace cdeal {

namespace {

// Input weights may carry 12-digit rounding; they are renormalized exactly.
constexpr double kMassTolerance = 1e-9;
constexpr double kKnotMerge = 1e-14;

bool same_slope(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

WeightingMeasure::WeightingMeasure(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("weighting measure needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.level < b.level; });
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.level > 0.0 && a.level <= 1.0))
            throw DomainError("weighting measure level " + format_number(a.level) +
                              " outside (0, 1]");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw DomainError("weighting measure weights must be positive");
        if (!atoms_.empty() && atoms_.back().level == a.level)
            atoms_.back().weight += a.weight;
        else
            atoms_.push_back(a);
        total += a.weight;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw DomainError("weighting measure weights sum to " + format_number(total));
    for (auto& a : atoms_) a.weight /= total;
}

DistortionFunction::DistortionFunction(std::vector<double> xs, std::vector<double> values) {
    if (xs.size() != values.size() || xs.size() < 2)
        throw DomainError("distortion function needs matching knot lists of length >= 2");
    if (std::abs(xs.front()) > kKnotMerge || std::abs(xs.back() - 1.0) > kKnotMerge)
        throw DomainError("distortion knots must span [0, 1]");
    if (std::abs(values.front()) > kMassTolerance || std::abs(values.back() - 1.0) > kMassTolerance)
        throw DomainError("distortion function must satisfy Psi(0) = 0 and Psi(1) = 1");
    xs.front() = 0.0;
    xs.back() = 1.0;
    values.front() = 0.0;
    values.back() = 1.0;
    for (auto& v : values) {
        if (v > 1.0 && v <= 1.0 + kMassTolerance) v = 1.0;
    }

    // Merge near-coincident knots, keeping the later one (the endpoint 1 wins).
    std::vector<double> mx{xs.front()};
    std::vector<double> mv{values.front()};
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] >= xs[i - 1])) throw DomainError("distortion knots must be increasing");
        if (xs[i] - mx.back() <= kKnotMerge) {
            if (mx.size() > 1) {
                mx.back() = xs[i];
                mv.back() = values[i];
            }
            continue;
        }
        mx.push_back(xs[i]);
        mv.push_back(values[i]);
    }
    if (mx.size() < 2) throw DomainError("distortion knots collapse to a point");
    mx.back() = 1.0;
    mv.back() = 1.0;

    // Drop interior knots between collinear segments.
    xs_.push_back(mx[0]);
    values_.push_back(mv[0]);
    for (std::size_t i = 1; i < mx.size(); ++i) {
        if (xs_.size() >= 2) {
            const std::size_t k = xs_.size() - 1;
            const double prev = (values_[k] - values_[k - 1]) / (xs_[k] - xs_[k - 1]);
            const double next = (mv[i] - values_[k]) / (mx[i] - xs_[k]);
            if (same_slope(prev, next)) {
                xs_.back() = mx[i];
                values_.back() = mv[i];
                continue;
            }
        }
        xs_.push_back(mx[i]);
        values_.push_back(mv[i]);
    }

    const auto s = slopes();
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < -1e-12) throw DomainError("distortion function must be nondecreasing");
        if (j > 0 && s[j] > s[j - 1] + 1e-9 * std::max(1.0, s[j - 1]))
            throw DomainError("distortion function must be concave");
    }
}

double DistortionFunction::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const auto j = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
    return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

double DistortionFunction::density(double x) const {
    if (x > 1.0) return 0.0;
    if (x <= 0.0) return (values_[1] - values_[0]) / (xs_[1] - xs_[0]);
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    const auto j = static_cast<std::size_t>(it - xs_.begin());
    return (values_[j] - values_[j - 1]) / (xs_[j] - xs_[j - 1]);
}

std::vector<double> DistortionFunction::slopes() const {
    std::vector<double> s;
    s.reserve(xs_.size() - 1);
    for (std::size_t j = 1; j < xs_.size(); ++j)
        s.push_back((values_[j] - values_[j - 1]) / (xs_[j] - xs_[j - 1]));
    return s;
}

WeightingMeasure make_tailvar(double level) {
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("Tail V@R level must lie in (0, 1]");
    return WeightingMeasure({{level, 1.0}});
}

WeightingMeasure make_betavar_grid(double alpha, double beta, int m) {
    if (!(alpha > -1.0)) throw DomainError("Beta V@R requires alpha > -1");
    if (!(beta > -1.0 && beta < alpha)) throw DomainError("Beta V@R requires -1 < beta < alpha");
    if (m < 2) throw DomainError("Beta V@R grid needs at least 2 cells");
    const double a = beta + 1.0;
    const double b = alpha - beta;
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double p = (i + 0.5) / m;
        const double level = boost::math::ibeta_inv(a, b, p);
        if (!(level > 0.0)) throw DomainError("Beta V@R grid level underflows to 0");
        atoms.push_back({level, 1.0 / m});
    }
    return WeightingMeasure(std::move(atoms));
}

WeightingMeasure make_alphavar_grid(double alpha, int m) {
    if (!(alpha > 1.0)) throw DomainError("Alpha V@R grid requires alpha > 1");
    return make_betavar_grid(alpha, 1.0, m);
}

DistortionFunction distortion(const WeightingMeasure& mu) {
    const auto& atoms = mu.atoms();
    const std::size_t k = atoms.size();
    // psi on (lambda_{j-1}, lambda_j] is the tail sum of w / lambda over levels >= lambda_j.
    std::vector<double> tail(k + 1, 0.0);
    for (std::size_t j = k; j-- > 0;) tail[j] = tail[j + 1] + atoms[j].weight / atoms[j].level;

    std::vector<double> xs{0.0};
    std::vector<double> values{0.0};
    double prev = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        acc += tail[j] * (atoms[j].level - prev);
        prev = atoms[j].level;
        xs.push_back(prev);
        values.push_back(acc);
    }
    if (xs.back() < 1.0) {
        // Psi is exactly 1 from the largest level on.
        values.back() = 1.0;
        xs.push_back(1.0);
        values.push_back(1.0);
    }
    return DistortionFunction(std::move(xs), std::move(values));
}

WeightingMeasure weighting_measure(const DistortionFunction& psi) {
    const auto& xs = psi.xs();
    const auto s = psi.slopes();
    std::vector<Atom> atoms;
    for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
        const double mass = xs[j] * (s[j - 1] - s[j]);
        if (mass > 1e-14) atoms.push_back({xs[j], mass});
    }
    if (s.back() > 1e-14) atoms.push_back({1.0, s.back()});
    return WeightingMeasure(std::move(atoms));
}

double phi(const DistortionFunction& psi, double x) {
    if (!(x >= 0.0)) throw DomainError("Phi is defined for x >= 0");
    double best = 0.0;
    for (std::size_t j = 0; j < psi.xs().size(); ++j)
        best = std::max(best, psi.values()[j] - x * psi.xs()[j]);
    return best;
}

double rho_distortion(const DistortionFunction& psi, const RandomVariable& x) {
    const auto order = ascending_order(x.values());
    const Vector& p = x.space()->probs();
    double z = 0.0;
    double prev = 0.0;
    double acc = 0.0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        z += p[order[t]];
        const double cur = t + 1 == order.size() ? 1.0 : psi(z);
        acc += x[order[t]] * (cur - prev);
        prev = cur;
    }
    return -acc;
}

double rho_wvar(const WeightingMeasure& mu, const RandomVariable& x) {
    return rho_distortion(distortion(mu), x);
}

WeightingMeasure measure_from_json(const Json& spec) {
    if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string())
        throw ParseError("measure spec: expected an object with a string \"type\"");
    const auto type = spec["type"].get<std::string>();
    auto number = [&](const char* key) {
        if (!spec.contains(key) || !spec[key].is_number())
            throw ParseError("measure spec (" + type + "): missing number \"" + key + "\"");
        return spec[key].get<double>();
    };
    auto grid = [&]() {
        const double g = number("grid");
        if (g != std::floor(g)) throw ParseError("measure spec: \"grid\" must be an integer");
        return static_cast<int>(g);
    };
    if (type == "tailvar") return make_tailvar(number("lambda"));
    if (type == "alphavar") return make_alphavar_grid(number("alpha"), grid());
    if (type == "betavar") return make_betavar_grid(number("alpha"), number("beta"), grid());
    if (type == "discrete") {
        if (!spec.contains("atoms") || !spec["atoms"].is_array())
            throw ParseError("measure spec (discrete): missing array \"atoms\"");
        std::vector<Atom> atoms;
        for (const auto& a : spec["atoms"]) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw ParseError("measure spec (discrete): atoms must be [level, weight] pairs");
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        return WeightingMeasure(std::move(atoms));
    }
    throw ParseError("measure spec: unknown type \"" + type + "\"");
}

Json measure_to_json(const WeightingMeasure& mu) {
    Json atoms = Json::array();
    for (const auto& a : mu.atoms()) atoms.push_back({round12(a.level), round12(a.weight)});
    return Json{{"type", "discrete"}, {"atoms", std::move(atoms)}};
}

Json distortion_to_json(const DistortionFunction& psi) {
    Json knots = Json::array();
    for (std::size_t j = 0; j < psi.xs().size(); ++j)
        knots.push_back({round12(psi.xs()[j]), round12(psi.values()[j])});
    return Json{{"knots", std::move(knots)}};
}

}  // namespace cdeal
