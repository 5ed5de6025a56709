#include "cdeal/sensitivity.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cdeal;

namespace {

RandomVariable rv(const SpacePtr& s, std::vector<double> v) {
    return RandomVariable(s, Eigen::Map<Vector>(v.data(), static_cast<Index>(v.size())));
}

BondSchedule single_bond() { return BondSchedule{{2.0}, {1.0}, {0.0}}; }

}  // namespace

TEST(CallDelta, Examples) {
    auto s = ScenarioSpace::uniform(3);
    const auto xi = rv(s, {0.9, 1.0, 1.1});
    const auto d = call_delta_payoff(100, 100, 0.0, 1.0, xi);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_DOUBLE_EQ(d[1], 1.0);
    EXPECT_DOUBLE_EQ(d[2], 1.1);
    const auto all = call_delta_payoff(100, 0, 0.05, 2.0, xi);
    for (Index i = 0; i < 3; ++i) EXPECT_NEAR(all[i], std::exp(-0.1) * xi[i], 1e-15);
    const auto none = call_delta_payoff(100, 120, 0.05, 2.0, xi);
    EXPECT_EQ(none.values(), Vector::Zero(3));
    EXPECT_THROW(call_delta_payoff(0.0, 1, 0, 1, xi), DomainError);
    EXPECT_THROW(call_delta_payoff(-1.0, 1, 0, 1, xi), DomainError);
    EXPECT_THROW(call_delta_payoff(1.0, 1, 0, -1, xi), DomainError);
}

TEST(CallDelta, MatchesFiniteDifferenceOffKink) {
    gen::Gen g(71);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = g.space(g.integer(1, 8));
        Vector v(s->size());
        for (Index i = 0; i < v.size(); ++i) v[i] = g.uniform(0.5, 1.5);
        const RandomVariable xi(s, v);
        const double spot = g.uniform(50, 150), strike = g.uniform(50, 150);
        const double rate = g.uniform(0, 0.1), expiry = g.uniform(0, 3);
        const auto d = call_delta_payoff(spot, strike, rate, expiry, xi);
        const double h = 1e-6;
        for (Index i = 0; i < v.size(); ++i) {
            if (std::abs(spot * v[i] - strike) < 1e-3) continue;
            const auto pay = [&](double sp) { return std::exp(-rate * expiry) * std::max(sp * v[i] - strike, 0.0); };
            EXPECT_NEAR(d[i], (pay(spot + h) - pay(spot - h)) / (2 * h), 1e-6);
        }
    }
}

TEST(BondDelta, SingleCashflow) {
    auto s = ScenarioSpace::uniform(1);
    const auto d = bond_option_delta_payoff(0.05, 0.0, 1.0, single_bond(), 0.0, rv(s, {1.0}));
    EXPECT_NEAR(d[0], -std::exp(-0.1), 1e-15);
    EXPECT_NEAR(d[0], -0.904837, 1e-6);
}

TEST(BondDelta, ZeroCases) {
    auto s = ScenarioSpace::uniform(3);
    const auto xi = rv(s, {0.5, 1.0, 2.0});
    EXPECT_EQ(bond_option_delta_payoff(0.05, 10.0, 1.0, single_bond(), 0.0, xi).values(), Vector::Zero(3));
    const BondSchedule zero{{2.0, 3.0}, {0.0, 0.0}, {0.1, 0.2}};
    EXPECT_EQ(bond_option_delta_payoff(0.05, 0.0, 1.0, zero, 0.0, xi).values(), Vector::Zero(3));
}

TEST(BondDelta, MatchesIndependentFormula) {
    gen::Gen g(72);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = g.space(g.integer(1, 6));
        Vector v(s->size());
        for (Index i = 0; i < v.size(); ++i) v[i] = g.uniform(-1.0, 3.0);
        const RandomVariable xi(s, v);
        const double expiry = g.uniform(0.0, 2.0);
        BondSchedule sched;
        for (int n = 0; n < g.integer(1, 4); ++n) {
            sched.times.push_back(expiry + g.uniform(0.1, 5.0));
            sched.cashflows.push_back(g.uniform(0.0, 10.0));
            sched.shape.push_back(g.uniform(-0.01, 0.03));
        }
        const double r0 = g.uniform(-0.02, 0.08), phi_t = g.uniform(0.0, 0.02);
        const double strike = g.uniform(0.0, 20.0);
        const auto d = bond_option_delta_payoff(r0, strike, expiry, sched, phi_t, xi);
        for (Index i = 0; i < v.size(); ++i) {
            const double r = r0 * v[i];
            double value = 0.0, slope = 0.0;
            for (std::size_t n = 0; n < sched.times.size(); ++n) {
                const double tau = sched.times[n] - expiry;
                const double fn = std::exp(-tau * r - tau * sched.shape[n]);
                value += sched.cashflows[n] * fn;
                slope += -tau * sched.cashflows[n] * fn;
            }
            const double expected = value >= strike ? std::exp(-expiry * (r0 + phi_t)) * slope : 0.0;
            EXPECT_NEAR(d[i], expected, 1e-12 * (1 + std::abs(expected)));
            EXPECT_LE(d[i], 0.0);
        }
    }
}

TEST(BondDelta, Errors) {
    auto s = ScenarioSpace::uniform(1);
    const auto xi = rv(s, {1.0});
    EXPECT_THROW(bond_option_delta_payoff(0.05, 0, 1.0, BondSchedule{}, 0.0, xi), DomainError);
    EXPECT_THROW(bond_option_delta_payoff(0.05, 0, 2.0, single_bond(), 0.0, xi), DomainError);
    EXPECT_THROW(bond_option_delta_payoff(0.05, 0, 3.0, single_bond(), 0.0, xi), DomainError);
    EXPECT_THROW(bond_option_delta_payoff(0.05, 0, 1.0, BondSchedule{{2.0}, {1.0, 2.0}, {0.0}}, 0.0, xi), ShapeError);
}

TEST(BondSchedule, ParsesJson) {
    double phi_t = -1.0;
    const auto sched = bond_schedule_from_json(Json::parse(R"({"expiry_shape":0.01,"cashflows":[[2,1],[3,101,0.02]]})"),
                                               phi_t);
    EXPECT_DOUBLE_EQ(phi_t, 0.01);
    ASSERT_EQ(sched.times.size(), 2u);
    EXPECT_DOUBLE_EQ(sched.cashflows[1], 101.0);
    EXPECT_DOUBLE_EQ(sched.shape[0], 0.0);
    EXPECT_DOUBLE_EQ(sched.shape[1], 0.02);
    EXPECT_THROW(bond_schedule_from_json(Json::parse(R"({"cashflows":[[2]]})"), phi_t), ParseError);
    EXPECT_THROW(bond_schedule_from_json(Json::parse(R"({"cashflows":[[2,"a"]]})"), phi_t), ParseError);
    EXPECT_THROW(bond_schedule_from_json(Json::parse(R"([1,2])"), phi_t), ParseError);
}

TEST(DeltaInterval, CompleteMarketAndConstants) {
    auto s = ScenarioSpace::uniform(2);
    const auto m = MarketModel::cone(s, {"S"}, {rv(s, {0.2, -0.2})});
    const auto xi = rv(s, {1.2, 0.8});
    const auto deriv = call_delta_payoff(100, 100, 0.0, 1.0, xi);
    const std::vector<ValuationGroup> g{ValuationGroup::wvar(make_tailvar(0.5))};
    const auto iv = delta_interval(m, g, deriv, PricingMode::conv);
    EXPECT_LE(iv.upper - iv.lower, 1e-9);
    EXPECT_NEAR(iv.upper, 0.6, 1e-9);
    const auto c = delta_interval(m, g, RandomVariable::constant(s, 0.7), PricingMode::max);
    EXPECT_NEAR(c.lower, 0.7, 1e-12);
    EXPECT_NEAR(c.upper, 0.7, 1e-12);
}

TEST(DeltaInterval, DelegatesAndStaysInPayoffBounds) {
    gen::Gen g(73);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = g.space(g.integer(2, 8));
        Vector v(s->size());
        for (Index i = 0; i < v.size(); ++i) v[i] = g.uniform(0.6, 1.4);
        const RandomVariable xi(s, v);
        const double rate = 0.03, expiry = 1.5;
        const auto deriv = call_delta_payoff(100, g.uniform(80, 120), rate, expiry, xi);
        const auto m = g.coin() ? MarketModel::empty(s) : MarketModel::cone(s, {"X"}, {g.centred(s)});
        std::vector<ValuationGroup> groups{ValuationGroup::wvar(g.measure()), ValuationGroup::wvar(g.measure())};
        for (const auto mode : {PricingMode::conv, PricingMode::max}) {
            const auto iv = delta_interval(m, groups, deriv, mode);
            const auto pi = price_interval(m, groups, deriv, mode);
            EXPECT_EQ(iv.lower, pi.lower);
            EXPECT_EQ(iv.upper, pi.upper);
            EXPECT_GE(iv.lower, -1e-9);
            EXPECT_LE(iv.upper, std::exp(-rate * expiry) * v.maxCoeff() + 1e-9);
        }
    }
}
