#pragma once

#include "cdeal/spectral.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace cdeal {

/// Weighted V@R of the empirical (uniform) distribution of `samples`.
double est_wvar(const std::vector<double>& samples, const WeightingMeasure& mu);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Resamples drawn in chunks of this many, each from its own seeded stream.
inline constexpr long kResampleChunk = 8192;

/// Bootstrap of -E min of `alpha` draws (with replacement). Results depend on
/// `seed` only, not on `threads`.
McEstimate est_alpha_var(const std::vector<double>& samples, int alpha, long resamples,
                         std::uint64_t seed, int threads = 1);

/// Bootstrap of -E (1/beta) sum of the `beta` smallest of `alpha` draws.
McEstimate est_beta_var(const std::vector<double>& samples, int alpha, int beta, long resamples,
                        std::uint64_t seed, int threads = 1);

struct ContributionEstimate {
    double value = 0.0;
    /// False when tied w values straddle a kink of Psi.
    bool unique = true;
};

/// sum_t x_{n(t)} (Psi(t/T) - Psi((t-1)/T)) with pairs sorted by w ascending
/// (stable). Estimates sup E_Q X over the determining set restricted to the
/// extreme measure of W.
ContributionEstimate est_risk_contribution(const std::vector<std::pair<double, double>>& pairs,
                                           const WeightingMeasure& mu);

/// est_wvar of within-bin means of x, with y split into `bins` equal-frequency
/// bins. Tied y values always share a bin, so fewer bins may come out.
double est_factor_risk(const std::vector<std::pair<double, double>>& pairs,
                       const WeightingMeasure& mu, int bins);

/// min over groups and candidates X of est_wvar(X - F). An empty candidate
/// list means the zero hedge.
double est_upper_price(const std::vector<double>& claim,
                       const std::vector<std::vector<double>>& candidates,
                       const std::vector<WeightingMeasure>& groups);

}  // namespace cdeal
