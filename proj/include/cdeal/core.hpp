#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace cdeal {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operands that do not live on the same scenario space, or mismatched dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or document. The message carries the location.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Problem too large for a brute-force routine.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Simplex breakdown: tiny pivots, iteration cap, or residuals after solve.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// The market admits a strictly acceptable opportunity.
class NsaoViolation : public Error {
public:
    using Error::Error;
};

}  // namespace cdeal
