#pragma once

#include "cdeal/scenario.hpp"
#include "cdeal/serialize.hpp"
#include "cdeal/spectral.hpp"

#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cdeal {

/// Admissible positions in one asset. The zero trade is always admissible.
struct PositionBounds {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

/// Discounted asset P&Ls on a scenario space plus a per-asset position box.
/// A box whose bounds are all 0 or infinite is a cone.
class MarketModel {
public:
    MarketModel(SpacePtr space, std::vector<std::string> names, std::vector<RandomVariable> assets,
                std::vector<PositionBounds> bounds);

    /// Unconstrained positions (h in R^d).
    static MarketModel cone(SpacePtr space, std::vector<std::string> names,
                            std::vector<RandomVariable> assets);
    /// No tradable assets: the attainable set is {0}.
    static MarketModel empty(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    Index num_assets() const { return static_cast<Index>(assets_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<RandomVariable>& assets() const { return assets_; }
    const std::vector<PositionBounds>& bounds() const { return bounds_; }
    bool is_cone() const;

    /// Scenarios x assets.
    Matrix payoffs() const;
    RandomVariable portfolio(const Vector& positions) const;

private:
    SpacePtr space_;
    std::vector<std::string> names_;
    std::vector<RandomVariable> assets_;
    std::vector<PositionBounds> bounds_;
};

/// Valuation measures of one group: the determining set of a Weighted V@R or
/// the convex hull of an explicit list of measures.
class ValuationGroup {
public:
    static ValuationGroup wvar(WeightingMeasure mu);
    static ValuationGroup explicit_measures(std::vector<Measure> measures);

    bool is_wvar() const { return std::holds_alternative<WeightingMeasure>(content_); }
    const WeightingMeasure& measure() const { return std::get<WeightingMeasure>(content_); }
    const std::vector<Measure>& measures() const { return std::get<std::vector<Measure>>(content_); }

private:
    explicit ValuationGroup(std::variant<WeightingMeasure, std::vector<Measure>> content)
        : content_(std::move(content)) {}
    std::variant<WeightingMeasure, std::vector<Measure>> content_;
};

enum class PricingMode { max, conv };
enum class Side { upper, lower };

struct PriceInterval {
    double lower = 0.0;
    double upper = 0.0;
    /// Positions held against a long claim (lower bound) / a short claim (upper bound).
    Vector hedge_lower;
    Vector hedge_upper;
};

struct NsaoReport {
    bool holds = true;
    /// Strictly acceptable trade when violated and found by the primal LP.
    Vector hedge;
    /// Risk of `hedge` (negative) under the relevant combined risk measure.
    double hedge_risk = 0.0;
    std::string detail;
};

/// Subset-constraint dual over valuation measures intersected with the
/// risk-neutral set.
struct DualResult {
    bool feasible = false;
    double value = 0.0;
    Vector q;
    Vector hedge;
};

NsaoReport nsao_check(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                      PricingMode mode);

PriceInterval price_interval_conv(const MarketModel& market,
                                  const std::vector<ValuationGroup>& groups,
                                  const RandomVariable& claim);
PriceInterval price_interval_max(const MarketModel& market,
                                 const std::vector<ValuationGroup>& groups,
                                 const RandomVariable& claim);
PriceInterval price_interval(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                             const RandomVariable& claim, PricingMode mode);

/// Brute force over all 2^|Omega| subsets; |Omega| <= 14.
DualResult dual_bruteforce(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                           const RandomVariable& claim, Side side,
                           PricingMode mode = PricingMode::conv);

inline constexpr Index kDualScenarioCap = 14;

/// Piecewise-linear function given by breakpoints plus the slopes beyond them.
struct PiecewiseLinear {
    std::vector<double> xs;
    std::vector<double> ys;
    double left_slope = 0.0;
    double right_slope = 0.0;

    double operator()(double x) const;
};

struct Tranche {
    /// Sub-intervals (a, b] of [0, 1] (CDF levels) assigned to the group; the
    /// level 0 belongs to the first interval overall.
    std::vector<std::pair<double, double>> intervals;
    PiecewiseLinear split;
    double shift = 0.0;
    Vector raw;
    Vector payoff;
    double risk = 0.0;
};

struct TranchePlan {
    double upper_price = 0.0;
    Vector hedge;
    Vector residual;
    std::vector<Tranche> tranches;
};

/// Comonotone split of `residual` into group tranches f^n(L) + c^n with
/// rho^n(tranche) = 0. Overlapping active regions go to the lowest index.
std::vector<Tranche> tranche_split(const std::vector<WeightingMeasure>& measures,
                                   const RandomVariable& residual);

/// Hedge at the upper price, then split the residual liability.
TranchePlan superrep_split(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                           const RandomVariable& claim);

struct LiquidityPoint {
    double volume = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

/// Volume-dependent convolution prices; grid points are independent and may
/// be evaluated on `threads` workers with identical results.
std::vector<LiquidityPoint> liquidity_curve(const MarketModel& market,
                                            const std::vector<ValuationGroup>& groups,
                                            const RandomVariable& claim,
                                            const std::vector<double>& volumes, int threads = 1);

Json price_interval_to_json(const PriceInterval& interval);
Json tranche_plan_to_json(const TranchePlan& plan);
std::string liquidity_to_csv(const std::vector<LiquidityPoint>& curve);

}  // namespace cdeal
