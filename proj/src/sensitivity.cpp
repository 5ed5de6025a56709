#include "cdeal/sensitivity.hpp"

#include <algorithm>
#include <cmath>

namespace cdeal {

RandomVariable call_delta_payoff(double spot, double strike, double rate, double expiry,
                                 const RandomVariable& xi) {
    if (!(spot > 0.0)) throw DomainError("spot price must be positive");
    if (!(expiry >= 0.0)) throw DomainError("expiry must be nonnegative");
    if (!std::isfinite(strike) || !std::isfinite(rate) || !std::isfinite(expiry))
        throw DomainError("call parameters must be finite");
    const double discount = std::exp(-rate * expiry);
    const double threshold = strike / spot;
    Vector out(xi.size());
    for (Index j = 0; j < xi.size(); ++j) out[j] = xi[j] >= threshold ? discount * xi[j] : 0.0;
    return RandomVariable(xi.space(), out);
}

BondSchedule bond_schedule_from_json(const Json& doc, double& expiry_shape) {
    if (!doc.is_object()) throw ParseError("bond schedule: expected an object");
    if (!doc.contains("cashflows") || !doc["cashflows"].is_array())
        throw ParseError("bond schedule: missing array 'cashflows'");
    expiry_shape = 0.0;
    if (doc.contains("expiry_shape")) {
        if (!doc["expiry_shape"].is_number()) throw ParseError("bond schedule: 'expiry_shape' must be a number");
        expiry_shape = doc["expiry_shape"].get<double>();
    }
    BondSchedule s;
    const auto& rows = doc["cashflows"];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = "bond schedule: cashflows[" + std::to_string(i) + "]";
        if (!r.is_array() || r.size() < 2 || r.size() > 3)
            throw ParseError(where + " must be [time, cashflow] or [time, cashflow, shape]");
        for (const auto& v : r) {
            if (!v.is_number()) throw ParseError(where + " must contain numbers only");
        }
        s.times.push_back(r[0].get<double>());
        s.cashflows.push_back(r[1].get<double>());
        s.shape.push_back(r.size() == 3 ? r[2].get<double>() : 0.0);
    }
    return s;
}

RandomVariable bond_option_delta_payoff(double r0, double strike, double expiry,
                                        const BondSchedule& schedule, double expiry_shape,
                                        const RandomVariable& xi) {
    const std::size_t n = schedule.times.size();
    if (n == 0) throw DomainError("bond schedule is empty");
    if (schedule.cashflows.size() != n || schedule.shape.size() != n)
        throw ShapeError("bond schedule columns differ in length");
    if (!(expiry >= 0.0)) throw DomainError("expiry must be nonnegative");
    const double first = *std::min_element(schedule.times.begin(), schedule.times.end());
    if (!(expiry < first)) throw DomainError("option expiry must precede every cashflow date");

    const double discount = std::exp(-expiry * (r0 + expiry_shape));
    Vector out(xi.size());
    for (Index j = 0; j < xi.size(); ++j) {
        const double r = r0 * xi[j];
        double value = 0.0;
        double slope = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double tau = schedule.times[k] - expiry;
            const double f = std::exp(-tau * r - tau * schedule.shape[k]);
            value += schedule.cashflows[k] * f;
            slope -= schedule.cashflows[k] * tau * f;
        }
        out[j] = value >= strike ? discount * slope : 0.0;
    }
    return RandomVariable(xi.space(), out);
}

PriceInterval delta_interval(const MarketModel& market, const std::vector<ValuationGroup>& groups,
                             const RandomVariable& deriv, PricingMode mode) {
    return price_interval(market, groups, deriv, mode);
}

}  // namespace cdeal
