#include "cdeal/algebra.hpp"
#include "cdeal/pricing.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace cdeal;

namespace {

RandomVariable rv(const SpacePtr& s, std::vector<double> v) {
    return RandomVariable(s, Eigen::Map<Vector>(v.data(), static_cast<Index>(v.size())));
}

const WeightingMeasure mu1({{1.0 / 3.0, 0.5}, {1.0, 0.5}});
const WeightingMeasure mu2({{2.0 / 3.0, 1.0}});

}  // namespace

TEST(ConvolveWvar, PrintedPair) {
    const auto c = convolve_wvar({mu1, mu2});
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c.atoms()[0].level, 0.5, 1e-12);
    EXPECT_NEAR(c.atoms()[0].weight, 0.5, 1e-12);
    EXPECT_NEAR(c.atoms()[1].level, 1.0, 1e-12);
    EXPECT_NEAR(c.atoms()[1].weight, 0.5, 1e-12);
}

TEST(ConvolveWvar, TrivialCases) {
    EXPECT_THROW(convolve_wvar({}), DomainError);
    for (const auto& mu : {mu1, mu2}) {
        for (const auto& c : {convolve_wvar({mu}), convolve_wvar({mu, mu})}) {
            ASSERT_EQ(c.size(), mu.size());
            for (std::size_t k = 0; k < mu.size(); ++k) {
                EXPECT_NEAR(c.atoms()[k].level, mu.atoms()[k].level, 1e-12);
                EXPECT_NEAR(c.atoms()[k].weight, mu.atoms()[k].weight, 1e-12);
            }
        }
    }
}

TEST(ConvolveWvar, DistortionIsPointwiseMinimum) {
    gen::Gen g(41);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = g.integer(1, 4);
        std::vector<std::vector<Atom>> atoms;
        std::vector<WeightingMeasure> mus;
        for (int i = 0; i < n; ++i) {
            atoms.push_back(g.atoms(4));
            mus.emplace_back(atoms.back());
        }
        const auto c = convolve_wvar(mus);
        double total = 0.0;
        for (const auto& a : c.atoms()) total += a.weight;
        EXPECT_NEAR(total, 1.0, 1e-12);
        const auto psi = distortion(c);
        for (int k = 0; k < 30; ++k) {
            const double x = g.uniform(0.0, 1.0);
            double lo = 1e300;
            for (const auto& a : atoms) lo = std::min(lo, oracle::psi(a, x));
            EXPECT_NEAR(psi(x), lo, 1e-10);
        }
    }
}

TEST(ConvolveWvar, RiskBelowEachGroup) {
    gen::Gen g(42);
    for (int trial = 0; trial < 500; ++trial) {
        auto s = g.space(g.integer(1, 10));
        const auto x = g.variable(s);
        std::vector<WeightingMeasure> mus;
        for (int i = 0; i < g.integer(1, 4); ++i) mus.push_back(g.measure());
        const double conv = rho_wvar(convolve_wvar(mus), x);
        double lowest = 1e300;
        for (const auto& mu : mus) lowest = std::min(lowest, rho_wvar(mu, x));
        EXPECT_LE(conv, lowest + 1e-10);
    }
}

TEST(ConvolveWvar, InfimalConvolutionOverSplits) {
    // Random two-way splits never beat the convolution; the tranche split attains it.
    gen::Gen g(43);
    for (int trial = 0; trial < 60; ++trial) {
        auto s = g.space(g.integer(2, 6));
        const auto x = g.variable(s);
        const std::vector<WeightingMeasure> mus{g.measure(), g.measure()};
        const double conv = rho_wvar(convolve_wvar(mus), x);
        for (int k = 0; k < 300; ++k) {
            const auto y = g.variable(s);
            EXPECT_GE(rho_wvar(mus[0], y) + rho_wvar(mus[1], x - y), conv - 1e-9);
        }
        const auto tranches = tranche_split(mus, x);
        EXPECT_NEAR(rho_wvar(mus[0], RandomVariable(s, tranches[0].raw)) +
                        rho_wvar(mus[1], RandomVariable(s, tranches[1].raw)),
                    conv, 1e-9);
    }
}

TEST(PointwiseMin, Crossings) {
    const auto m = pointwise_min({distortion(mu1), distortion(mu2)});
    EXPECT_NEAR(m(0.5), 0.75, 1e-15);
    EXPECT_NEAR(m(0.25), 0.375, 1e-15);
    EXPECT_NEAR(m(0.8), 0.9, 1e-15);
    EXPECT_THROW(pointwise_min({}), DomainError);
}

TEST(RhoMax, Examples) {
    auto s = ScenarioSpace::uniform(3);
    const auto x = rv(s, {-1, 0, 1000});
    EXPECT_NEAR(rho_max({mu1, mu2}, x), 0.5, 1e-12);
    EXPECT_NEAR(rho_wvar(mu1, x), -166.0, 1e-10);
    EXPECT_NEAR(rho_max({mu1}, x), rho_wvar(mu1, x), 0.0);
    EXPECT_NEAR(rho_max({mu1, mu2}, RandomVariable::constant(s, 4.0)), -4.0, 1e-14);
    EXPECT_THROW(rho_max({}, x), DomainError);
}

TEST(Majorant, PrintedPair) {
    const auto env = minimal_concave_majorant({distortion(mu1), distortion(mu2)});
    for (double x : {0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.8, 1.0}) {
        const double expected = x <= 1.0 / 3.0 ? 2.0 * x : (x <= 2.0 / 3.0 ? x + 1.0 / 3.0 : 1.0);
        EXPECT_NEAR(env(x), expected, 1e-12) << x;
    }
    const auto mu = weighting_measure(env);
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_NEAR(mu.atoms()[0].level, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(mu.atoms()[0].weight, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(mu.atoms()[1].level, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(mu.atoms()[1].weight, 2.0 / 3.0, 1e-12);
    auto s = ScenarioSpace::uniform(3);
    const auto x = rv(s, {-1, 0, 1000});
    EXPECT_NEAR(rho_wvar(mu, x), 2.0 / 3.0, 1e-10);
    EXPECT_GE(rho_wvar(mu, x) - rho_max({mu1, mu2}, x), 0.16);
}

TEST(Majorant, DominatesAndIsIdempotent) {
    gen::Gen g(44);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<DistortionFunction> ds;
        for (int i = 0; i < g.integer(1, 4); ++i) ds.push_back(distortion(g.measure()));
        const auto env = minimal_concave_majorant(ds);
        for (int k = 0; k < 20; ++k) {
            const double x = g.uniform(0.0, 1.0);
            for (const auto& d : ds) EXPECT_GE(env(x), d(x) - 1e-12);
        }
        const auto again = minimal_concave_majorant({env, env});
        for (int k = 0; k < 20; ++k) {
            const double x = g.uniform(0.0, 1.0);
            EXPECT_NEAR(again(x), env(x), 1e-12);
        }
        // Rho of the envelope dominates the maximum of risks.
        auto s = g.space(g.integer(1, 8));
        const auto x = g.variable(s);
        double mx = -1e300;
        for (const auto& d : ds) mx = std::max(mx, rho_distortion(d, x));
        EXPECT_GE(rho_distortion(env, x), mx - 1e-10);
    }
    const auto single = distortion(mu1);
    const auto env = minimal_concave_majorant({single});
    EXPECT_EQ(env.xs(), single.xs());
}
