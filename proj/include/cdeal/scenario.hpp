#pragma once

#include "cdeal/core.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdeal {

/// Finite probability space: scenario labels with strictly positive
/// probabilities. Probabilities are checked to sum to one within 1e-12 and
/// renormalized once on construction.
class ScenarioSpace {
public:
    ScenarioSpace(std::vector<std::string> labels, Vector probs);

    /// n equally likely scenarios labelled "s0".."s{n-1}".
    static std::shared_ptr<const ScenarioSpace> uniform(Index n);
    static std::shared_ptr<const ScenarioSpace> make(std::vector<std::string> labels,
                                                     Vector probs);

    Index size() const { return probs_.size(); }
    const Vector& probs() const { return probs_; }
    double prob(Index i) const { return probs_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool operator==(const ScenarioSpace& other) const;

private:
    std::vector<std::string> labels_;
    Vector probs_;
};

using SpacePtr = std::shared_ptr<const ScenarioSpace>;

/// Scenario-indexed real values on a shared space.
class RandomVariable {
public:
    RandomVariable(SpacePtr space, Vector values);

    static RandomVariable constant(SpacePtr space, double value);

    const SpacePtr& space() const { return space_; }
    const Vector& values() const { return values_; }
    Index size() const { return values_.size(); }
    double operator[](Index i) const { return values_[i]; }

    /// Expectation under the reference probability.
    double mean() const;

private:
    SpacePtr space_;
    Vector values_;
};

bool same_space(const RandomVariable& a, const RandomVariable& b);
void require_same_space(const RandomVariable& a, const RandomVariable& b);

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator-(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator-(const RandomVariable& a);
RandomVariable operator+(const RandomVariable& a, double m);
RandomVariable operator-(const RandomVariable& a, double m);
RandomVariable operator*(double c, const RandomVariable& a);

/// Probability measure on a scenario space, stored by its point masses.
/// `unique` is false when the measure was selected from a non-singleton set
/// (e.g. an extreme measure of a portfolio with tied values).
class Measure {
public:
    Measure(SpacePtr space, Vector masses, bool unique = true);

    const SpacePtr& space() const { return space_; }
    const Vector& masses() const { return masses_; }
    double operator[](Index i) const { return masses_[i]; }
    Index size() const { return masses_.size(); }
    bool unique() const { return unique_; }

    double expectation(const RandomVariable& x) const;

private:
    SpacePtr space_;
    Vector masses_;
    bool unique_;
};

/// Permutation sorting `values` ascending; ties keep their original order.
std::vector<Index> ascending_order(const Vector& values);

/// Left-continuous quantile q_s = inf{x : P(X <= x) >= s}, s in (0, 1].
double quantile(const RandomVariable& x, double s);

/// E(X | Y), grouping scenarios by exact equality of the values of Y.
RandomVariable conditional_expectation(const RandomVariable& x, const RandomVariable& y);

/// A scenario space together with its named payoff columns, in file order.
struct ScenarioSet {
    SpacePtr space;
    std::vector<std::pair<std::string, RandomVariable>> columns;

    bool contains(std::string_view name) const;
    const RandomVariable& column(std::string_view name) const;
};

enum class ScenarioFormat { automatic, json, csv };

ScenarioSet load_scenarios(const std::filesystem::path& path,
                           ScenarioFormat format = ScenarioFormat::automatic);
ScenarioSet parse_scenarios_json(std::string_view text);
ScenarioSet parse_scenarios_csv(std::string_view text);

std::string scenarios_to_json(const ScenarioSet& set);
std::string scenarios_to_csv(const ScenarioSet& set);

}  // namespace cdeal
