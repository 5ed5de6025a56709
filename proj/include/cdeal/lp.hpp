#pragma once

#include "cdeal/core.hpp"

namespace cdeal::lp {

enum class Sense { minimize, maximize };
enum class Status { optimal, infeasible, unbounded };

/// Dense linear program
///
///     min/max  c'x   s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lower <= x <= upper.
///
/// Bounds may be infinite. Empty `lower`/`upper` mean x >= 0. A block with no
/// rows may be left default-constructed.
struct LinearProgram {
    Sense sense = Sense::minimize;
    Vector objective;
    Matrix eq_matrix;
    Vector eq_rhs;
    Matrix ub_matrix;
    Vector ub_rhs;
    Vector lower;
    Vector upper;

    Index num_vars() const { return objective.size(); }
    Index num_eq() const { return eq_rhs.size(); }
    Index num_ub() const { return ub_rhs.size(); }
};

/// Dual values follow one convention for both senses: the derivative of the
/// optimal objective with respect to the row's right-hand side.
struct LpOutcome {
    Status status = Status::infeasible;
    Vector x;
    double objective = 0.0;
    Vector eq_duals;
    Vector ub_duals;
    /// Improving feasible direction when status is unbounded.
    Vector ray;
    long iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's rule and max-abs equilibration.
/// Deterministic for a given input. Throws ShapeError on inconsistent
/// dimensions and ConditioningError on numerical breakdown.
LpOutcome solve(const LinearProgram& program);

/// LP dual of `program`, whose optimal value equals the primal one. Finite
/// nonzero bounds are first turned into inequality rows.
LinearProgram dual_of(const LinearProgram& program);

/// Solves `dual_of(program)` and maps the outcome back: primal values are read
/// from the dual's row multipliers and primal row duals from the dual solution.
/// Worth it when the program has many more rows than columns.
LpOutcome solve_via_dual(const LinearProgram& program);

/// Largest violation of rows and bounds at `x`.
double max_violation(const LinearProgram& program, const Vector& x);

const char* to_string(Status status);

}  // namespace cdeal::lp
