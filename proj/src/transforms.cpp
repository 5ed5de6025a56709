#include "cdeal/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace cdeal {

double factor_risk(const WeightingMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    return rho_wvar(mu, conditional_expectation(x, y));
}

Measure extreme_measure(const DistortionFunction& psi, const RandomVariable& w) {
    const auto order = ascending_order(w.values());
    const Vector& p = w.space()->probs();
    Vector q(w.size());
    std::vector<double> z(order.size() + 1, 0.0);
    double prev = 0.0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        z[t + 1] = z[t] + p[order[t]];
        const double cur = t + 1 == order.size() ? 1.0 : psi(z[t + 1]);
        q[order[t]] = std::max(cur - prev, 0.0);
        prev = cur;
    }
    q /= q.sum();

    // Within a tie block [z_a, z_b] the extreme measure is pinned only when
    // Psi is linear there.
    bool unique = true;
    std::size_t start = 0;
    while (start < order.size() && unique) {
        std::size_t end = start + 1;
        while (end < order.size() && w[order[end]] == w[order[start]]) ++end;
        if (end - start > 1) {
            const double lo = z[start];
            const double hi = z[end];
            for (double knot : psi.xs()) {
                if (knot > lo + 1e-12 && knot < hi - 1e-12) {
                    unique = false;
                    break;
                }
            }
        }
        start = end;
    }
    return Measure(w.space(), std::move(q), unique);
}

Measure extreme_measure(const WeightingMeasure& mu, const RandomVariable& w) {
    return extreme_measure(distortion(mu), w);
}

double risk_contribution(const WeightingMeasure& mu, const RandomVariable& x,
                         const RandomVariable& w) {
    require_same_space(x, w);
    return -extreme_measure(mu, w).expectation(x);
}

double factor_risk_contribution(const WeightingMeasure& mu, const RandomVariable& x,
                                const RandomVariable& y, const RandomVariable& w) {
    return risk_contribution(mu, conditional_expectation(x, y), conditional_expectation(w, y));
}

Measure utility_measure(double risk_aversion, const RandomVariable& wealth) {
    if (!(risk_aversion > 0.0) || !std::isfinite(risk_aversion))
        throw DomainError("risk aversion must be positive");
    const Vector exponent = -risk_aversion * wealth.values();
    const double top = exponent.maxCoeff();
    Vector dens = wealth.space()->probs().array() * (exponent.array() - top).exp();
    dens /= dens.sum();
    return Measure(wealth.space(), std::move(dens));
}

Json measure_masses_to_json(const Measure& q) {
    return Json{{"masses", json_array(q.masses())}, {"unique", q.unique()}};
}

}  // namespace cdeal
