#pragma once

#include "cdeal/core.hpp"
#include "cdeal/scenario.hpp"
#include "cdeal/serialize.hpp"

#include <vector>

namespace cdeal {

struct Atom {
    double level;   ///< lambda in (0, 1]
    double weight;  ///< mass assigned to the Tail V@R of that level
};

/// Finitely supported probability measure on (0, 1] that weights Tail V@Rs.
/// Atoms are kept sorted by level; equal levels are merged.
class WeightingMeasure {
public:
    explicit WeightingMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
};

/// Concave, nondecreasing, piecewise-linear Psi on [0, 1] with Psi(0) = 0 and
/// Psi(1) = 1. Knots are strictly increasing and consecutive segments have
/// strictly decreasing slopes (collinear knots are merged on construction).
/// Beyond 1 the function is extended as the constant 1.
class DistortionFunction {
public:
    DistortionFunction(std::vector<double> xs, std::vector<double> values);

    /// Psi(x) for x >= 0.
    double operator()(double x) const;

    /// Left-continuous step density psi: the slope on (x_{j-1}, x_j];
    /// psi(0) is the first slope and psi(x) = 0 for x > 1.
    double density(double x) const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double> slopes() const;

private:
    std::vector<double> xs_;
    std::vector<double> values_;
};

WeightingMeasure make_tailvar(double level);

/// Beta(beta+1, alpha-beta) weighting density discretized onto m
/// equal-probability cells, each represented by its median.
WeightingMeasure make_betavar_grid(double alpha, double beta, int m);

/// Beta grid with beta = 1; requires alpha > 1.
WeightingMeasure make_alphavar_grid(double alpha, int m);

DistortionFunction distortion(const WeightingMeasure& mu);

/// Inverse of `distortion`: mu(dx) = -x Psi''(dx) with Psi extended flat past 1.
WeightingMeasure weighting_measure(const DistortionFunction& psi);

/// Phi(x) = sup_{y in [0,1]} (Psi(y) - x y), x >= 0.
double phi(const DistortionFunction& psi, double x);

/// Risk -sum_t x_(t) (Psi(z_t) - Psi(z_{t-1})) over ascending scenario values.
double rho_distortion(const DistortionFunction& psi, const RandomVariable& x);
double rho_wvar(const WeightingMeasure& mu, const RandomVariable& x);

/// Measure spec documents: tailvar | discrete | alphavar | betavar.
WeightingMeasure measure_from_json(const Json& spec);
Json measure_to_json(const WeightingMeasure& mu);
Json distortion_to_json(const DistortionFunction& psi);

}  // namespace cdeal
