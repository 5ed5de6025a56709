#pragma once

#include "cdeal/scenario.hpp"
#include "cdeal/spectral.hpp"

namespace cdeal {

/// rho(E(X | Y)).
double factor_risk(const WeightingMeasure& mu, const RandomVariable& x, const RandomVariable& y);

/// Extreme measure of `w`: scenario of ascending rank t receives Psi(z_t) - Psi(z_{t-1}).
/// On ties the stable-order representative is returned and `unique()` reports
/// whether a tie block straddles a kink of Psi.
Measure extreme_measure(const WeightingMeasure& mu, const RandomVariable& w);
Measure extreme_measure(const DistortionFunction& psi, const RandomVariable& w);

/// -E_Q X under the extreme measure of W.
double risk_contribution(const WeightingMeasure& mu, const RandomVariable& x,
                         const RandomVariable& w);

/// risk_contribution(mu, E(X|Y), E(W|Y)).
double factor_risk_contribution(const WeightingMeasure& mu, const RandomVariable& x,
                                const RandomVariable& y, const RandomVariable& w);

/// Exponential-utility pricing measure: masses proportional to p exp(-gamma W1).
Measure utility_measure(double risk_aversion, const RandomVariable& wealth);

Json measure_masses_to_json(const Measure& q);

}  // namespace cdeal
