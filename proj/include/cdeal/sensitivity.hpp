#pragma once

#include "cdeal/pricing.hpp"
#include "cdeal/scenario.hpp"
#include "cdeal/serialize.hpp"

#include <vector>

namespace cdeal {

/// d/dS of the discounted call payoff e^{-rT} (S xi - K)^+, scenario-wise:
/// e^{-rT} xi 1{xi >= K/S}.
RandomVariable call_delta_payoff(double spot, double strike, double rate, double expiry,
                                 const RandomVariable& xi);

/// Coupon schedule of the underlying bond. `shape[n]` is phi(T_n - T).
struct BondSchedule {
    std::vector<double> times;
    std::vector<double> cashflows;
    std::vector<double> shape;
};

/// Parses {"expiry_shape": phi(T), "cashflows": [[T_n, c_n, phi(T_n - T)], ...]}.
/// Returns the schedule and stores phi(T) in `expiry_shape`.
BondSchedule bond_schedule_from_json(const Json& doc, double& expiry_shape);

/// d/dr of the bond option payoff with short rate r = r0 xi:
/// e^{-T (r0 + phi(T))} sum_n c_n f_n'(r0 xi) 1{sum_n c_n f_n(r0 xi) >= K},
/// f_n(r) = exp(-(T_n - T) r - (T_n - T) phi(T_n - T)).
RandomVariable bond_option_delta_payoff(double r0, double strike, double expiry,
                                        const BondSchedule& schedule, double expiry_shape,
                                        const RandomVariable& xi);

/// Interval of E_Q deriv over the valuation measures, i.e. the price interval of `deriv`.
PriceInterval delta_interval(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                             const RandomVariable& deriv, PricingMode mode);

}  // namespace cdeal
