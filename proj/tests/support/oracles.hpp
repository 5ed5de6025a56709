#pragma once

// Reference computations kept deliberately independent of the library code
// paths they check: sorting, closed forms, brute-force enumeration.

#include "cdeal/scenario.hpp"
#include "cdeal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using cdeal::Atom;
using Vec = std::vector<double>;

/// Tail V@R by -1/lambda times the integral of the quantile over (0, lambda].
inline double tail_risk(const Vec& values, const Vec& probs, double lambda) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    double mass = 0.0;
    double integral = 0.0;
    for (auto i : idx) {
        const double take = std::min(probs[i], lambda - mass);
        if (take <= 0.0) break;
        integral += take * values[i];
        mass += take;
    }
    return -integral / lambda;
}

/// Tail V@R through min_c { -c + E(c - Y)^+ / lambda }, c over scenario values.
inline double tail_risk_ru(const Vec& values, const Vec& probs, double lambda) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : values) {
        double e = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) e += probs[j] * std::max(c - values[j], 0.0);
        best = std::min(best, -c + e / lambda);
    }
    return best;
}

inline double wvar_risk(const std::vector<Atom>& atoms, const Vec& values, const Vec& probs) {
    double r = 0.0;
    for (const auto& a : atoms) r += a.weight * tail_risk(values, probs, a.level);
    return r;
}

/// Psi(x) = sum_k w_k min(x / lambda_k, 1).
inline double psi(const std::vector<Atom>& atoms, double x) {
    double v = 0.0;
    for (const auto& a : atoms) v += a.weight * std::min(x / a.level, 1.0);
    return v;
}

/// Step density sum_{lambda_k >= x} w_k / lambda_k.
inline double density(const std::vector<Atom>& atoms, double x) {
    double v = 0.0;
    for (const auto& a : atoms) {
        if (a.level >= x) v += a.weight / a.level;
    }
    return v;
}

/// Every proper subset A satisfies q(A) <= cap(P(A)) + tol.
inline bool in_subset_polytope(const Vec& q, const Vec& probs, const std::function<double(double)>& cap,
                               double tol) {
    const std::size_t n = q.size();
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        double qa = 0.0;
        double pa = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::uint32_t{1} << j)) {
                qa += q[j];
                pa += probs[j];
            }
        }
        if (qa > cap(pa) + tol) return false;
    }
    return true;
}

/// Regularized incomplete beta by Lentz's continued fraction.
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    auto cf = [](double a, double b, double x) {
        const double tiny = 1e-300;
        double c = 1.0;
        double d = 1.0 - (a + b) * x / (a + 1.0);
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m < 10000; ++m) {
            const double m2 = 2.0 * m;
            double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        return h;
    };
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * cf(a, b, x) / a;
    return 1.0 - front * cf(b, a, 1.0 - x) / b;
}

/// Beta quantile by bisection.
inline double beta_quantile(double a, double b, double p) {
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (incomplete_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol, int depth = 40) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole, int d) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return rec(a, m, fa, flm, fm, left, d - 1) + rec(m, b, fm, frm, fb, right, d - 1);
        };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

/// Convex piecewise-linear minimization over h in R (single asset), exact:
/// the minimum sits where two scenario values of hX - F swap order, or at 0.
/// Returns +inf/-inf sentinels via `bounded`.
inline double min_over_line(const std::function<double(double)>& f, const Vec& x, const Vec& claim,
                            bool& bounded) {
    Vec candidates{0.0};
    for (std::size_t j = 0; j < x.size(); ++j) {
        for (std::size_t k = j + 1; k < x.size(); ++k) {
            if (x[j] != x[k]) candidates.push_back((claim[j] - claim[k]) / (x[j] - x[k]));
        }
    }
    double lo = *std::min_element(candidates.begin(), candidates.end());
    double hi = *std::max_element(candidates.begin(), candidates.end());
    const double far = 1.0 + std::max(std::abs(lo), std::abs(hi));
    // Slopes beyond the last breakpoints.
    const double right = f(hi + far) - f(hi + far - 1.0);
    const double left = f(lo - far) - f(lo - far + 1.0);
    bounded = right >= -1e-9 && left >= -1e-9;
    double best = std::numeric_limits<double>::infinity();
    for (double h : candidates) best = std::min(best, f(h));
    return best;
}

}  // namespace oracle
