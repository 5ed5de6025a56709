#include "cdeal/estimation.hpp"
#include "cdeal/algebra.hpp"
#include "cdeal/pricing.hpp"
#include "cdeal/transforms.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace cdeal;

namespace {

std::vector<double> uniform_samples(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) x = u(rng);
    return out;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

TEST(EstWvar, MatchesExactRiskOnUniformScenarios) {
    gen::Gen g(81);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = g.space(g.integer(1, 12), true);
        const auto x = g.variable(s);
        const auto mu = g.measure();
        EXPECT_NEAR(est_wvar(gen::to_std(x.values()), mu), rho_wvar(mu, x), 1e-12);
    }
    EXPECT_EQ(est_wvar({2.5, 2.5, 2.5}, make_tailvar(0.3)), -2.5);
    EXPECT_THROW(est_wvar({}, make_tailvar(0.5)), DomainError);
    EXPECT_THROW(est_wvar({1.0, NAN}, make_tailvar(0.5)), DomainError);
}

TEST(EstWvar, UniformTailMean) {
    const auto u = uniform_samples(100000, 82);
    const double est = est_wvar(u, make_tailvar(0.5));
    // Tail mean of the lower half: variance of U(0, 1/2) over n/2 points plus the quantile term.
    const double se = std::sqrt(1.0 / 48.0 / 50000.0 + 0.25 * 0.25 / 100000.0);
    EXPECT_NEAR(est, -0.25, 3 * se);
}

TEST(AlphaVar, UniformTargets) {
    const auto u = uniform_samples(100000, 83);
    for (const auto& [alpha, target] : {std::pair{2, -1.0 / 3.0}, std::pair{3, -0.25}}) {
        const auto e = est_alpha_var(u, alpha, 100000, 1234, 2);
        EXPECT_GT(e.std_error, 0.0);
        EXPECT_NEAR(e.estimate, target, 3 * e.std_error) << alpha;
    }
    const auto one = est_alpha_var(u, 1, 100000, 5, 1);
    EXPECT_NEAR(one.estimate, -mean(u), 3 * one.std_error);
}

TEST(AlphaVar, ConstantSamplesAreExact) {
    const std::vector<double> c(50, 1.75);
    const auto e = est_alpha_var(c, 4, 20000, 9, 3);
    EXPECT_EQ(e.estimate, -1.75);
    EXPECT_EQ(e.std_error, 0.0);
    const auto b = est_beta_var(c, 5, 3, 20000, 9, 3);
    EXPECT_EQ(b.estimate, -1.75);
}

TEST(AlphaVar, SeededAndThreadIndependent) {
    const auto u = uniform_samples(5000, 84);
    const auto a = est_alpha_var(u, 3, 50000, 77, 1);
    for (int threads : {1, 2, 3, 8}) {
        const auto b = est_alpha_var(u, 3, 50000, 77, threads);
        EXPECT_EQ(a.estimate, b.estimate) << threads;
        EXPECT_EQ(a.std_error, b.std_error) << threads;
    }
    const auto c = est_alpha_var(u, 3, 50000, 78, 1);
    EXPECT_NE(a.estimate, c.estimate);
}

TEST(AlphaVar, StandardErrorScaling) {
    const auto u = uniform_samples(20000, 85);
    const auto m = est_alpha_var(u, 2, 40000, 3, 2);
    const auto m2 = est_alpha_var(u, 2, 80000, 4, 2);
    const double ratio = (m2.std_error * m2.std_error) / (m.std_error * m.std_error);
    EXPECT_NEAR(ratio, 0.5, 0.1);
}

TEST(BetaVar, Definitions) {
    const auto u = uniform_samples(100000, 86);
    const auto a = est_alpha_var(u, 4, 30000, 11, 1);
    const auto b = est_beta_var(u, 4, 1, 30000, 11, 1);
    EXPECT_EQ(a.estimate, b.estimate);
    const auto full = est_beta_var(u, 3, 3, 100000, 12, 2);
    EXPECT_NEAR(full.estimate, -mean(u), 3 * full.std_error);
    const auto two = est_beta_var(u, 2, 1, 100000, 13, 2);
    EXPECT_NEAR(two.estimate, -1.0 / 3.0, 3 * two.std_error);
    // Mean of the 2 smallest of 3 uniforms is (1/4 + 1/2) / 2.
    const auto mid = est_beta_var(u, 3, 2, 100000, 14, 2);
    EXPECT_NEAR(mid.estimate, -0.375, 3 * mid.std_error);
}

TEST(BetaVar, Errors) {
    const std::vector<double> x{1, 2, 3};
    EXPECT_THROW(est_alpha_var(x, 0, 10, 1), DomainError);
    EXPECT_THROW(est_beta_var(x, 2, 3, 10, 1), DomainError);
    EXPECT_THROW(est_beta_var(x, 2, 0, 10, 1), DomainError);
    EXPECT_THROW(est_alpha_var(x, 2, 0, 1), DomainError);
    EXPECT_THROW(est_alpha_var({}, 2, 10, 1), DomainError);
}

TEST(RiskContribution, Examples) {
    const auto half = make_tailvar(0.5);
    const auto r = est_risk_contribution({{10, 4}, {20, 1}, {30, 3}, {40, 2}}, half);
    EXPECT_NEAR(r.value, 30.0, 1e-12);
    EXPECT_TRUE(r.unique);
    EXPECT_NEAR(est_risk_contribution({{5, 4}, {5, 1}, {5, 3}}, make_tailvar(0.4)).value, 5.0, 1e-12);
    EXPECT_FALSE(est_risk_contribution({{1, 0}, {2, 1}, {3, 1}, {4, 2}}, half).unique);
    EXPECT_TRUE(est_risk_contribution({{1, 1}, {2, 1}, {3, 3}, {4, 4}}, half).unique);
    EXPECT_THROW(est_risk_contribution({}, half), DomainError);
}

TEST(RiskContribution, MatchesExtremeMeasure) {
    gen::Gen g(87);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = g.space(g.integer(1, 10), true);
        const auto w = g.distinct(s);
        const auto x = g.variable(s);
        const auto mu = g.measure();
        std::vector<std::pair<double, double>> pairs;
        for (Index i = 0; i < s->size(); ++i) pairs.emplace_back(x[i], w[i]);
        const auto est = est_risk_contribution(pairs, mu);
        EXPECT_TRUE(est.unique);
        EXPECT_NEAR(est.value, extreme_measure(mu, w).expectation(x), 1e-10);
        EXPECT_NEAR(est.value, -risk_contribution(mu, x, w), 1e-10);
    }
}

TEST(FactorRisk, Examples) {
    const auto half = make_tailvar(0.5);
    EXPECT_NEAR(est_factor_risk({{1, 1}, {3, 1}, {5, 2}, {7, 2}}, half, 2), -2.0, 1e-12);
    EXPECT_NEAR(est_factor_risk({{1, 3}, {3, 9}, {5, 2}, {7, 0}}, half, 1), -4.0, 1e-12);
    EXPECT_NEAR(est_factor_risk({{1, 3}, {3, 9}, {5, 2}, {7, 0}}, half, 4), est_wvar({1, 3, 5, 7}, half), 1e-12);
    EXPECT_THROW(est_factor_risk({{1, 1}, {2, 2}}, half, 3), DomainError);
    EXPECT_THROW(est_factor_risk({{1, 1}}, half, 0), DomainError);
    EXPECT_THROW(est_factor_risk({}, half, 1), DomainError);
}

TEST(FactorRisk, TiesShareABinAndMatchConditionalExpectation) {
    gen::Gen g(88);
    for (int trial = 0; trial < 300; ++trial) {
        const int t = g.integer(1, 12);
        auto s = ScenarioSpace::uniform(t);
        const auto x = g.variable(s);
        Vector y(t);
        for (Index i = 0; i < t; ++i) y[i] = g.integer(0, 3);
        std::vector<std::pair<double, double>> pairs;
        for (Index i = 0; i < t; ++i) pairs.emplace_back(x[i], y[i]);
        const auto mu = g.measure();
        // With as many bins as samples, every distinct y value is its own bin.
        EXPECT_NEAR(est_factor_risk(pairs, mu, t), factor_risk(mu, x, RandomVariable(s, y)), 1e-10);
        EXPECT_LE(est_factor_risk(pairs, mu, g.integer(1, t)), est_wvar(gen::to_std(x.values()), mu) + 1e-10);
    }
}

TEST(UpperPrice, Properties) {
    const auto half = make_tailvar(0.5);
    const std::vector<double> f{1, 0, 0};
    EXPECT_NEAR(est_upper_price(f, {}, {half}), est_wvar({-1, 0, 0}, half), 1e-14);
    EXPECT_NEAR(est_upper_price(f, {f}, {half}), 0.0, 1e-14);
    EXPECT_THROW(est_upper_price(f, {{1, 2}}, {half}), ShapeError);
    EXPECT_THROW(est_upper_price(f, {}, {}), DomainError);
}

TEST(UpperPrice, BoundsExactPrice) {
    gen::Gen g(89);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = g.integer(2, 8);
        auto s = ScenarioSpace::uniform(n);
        const auto x = g.centred(s);
        const auto f = g.variable(s);
        const auto mu = g.measure();
        const auto exact = price_interval_conv(MarketModel::cone(s, {"X"}, {x}), {ValuationGroup::wvar(mu)}, f);
        std::vector<std::vector<double>> cands;
        for (int k = 0; k < 5; ++k) cands.push_back(gen::to_std(g.uniform(-3, 3) * x.values()));
        cands.push_back(gen::to_std(exact.hedge_upper[0] * x.values()));
        const double est = est_upper_price(gen::to_std(f.values()), cands, {mu});
        EXPECT_GE(est, exact.upper - 1e-9);
        EXPECT_NEAR(est, exact.upper, 1e-9);
    }
    // Three-scenario fixture.
    auto s = ScenarioSpace::uniform(3);
    const double est = est_upper_price({1, 0, 0}, {{0.5, 0, -0.5}, {1, 0, -1}, {0, 0, 0}}, {make_tailvar(2.0 / 3.0)});
    EXPECT_GE(est, 0.5 - 1e-9);
}
