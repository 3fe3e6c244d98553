#pragma once

#include <stdexcept>
#include <string>

namespace liejet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// nvars/order/degree mismatch between operands
struct DimensionError : Error {
    using Error::Error;
};

// map is not a valid coordinate change (linear part singular, wrong arity, ...)
struct InvalidMapError : Error {
    using Error::Error;
};

struct NotClosedError : Error {
    using Error::Error;
};

struct NotInvertibleError : Error {
    using Error::Error;
};

// inductive normalization asked to run at degree k but lower degrees are unprepared
struct NotPreparedError : Error {
    using Error::Error;
};

struct NoSolutionError : Error {
    using Error::Error;
};

struct NotReductiveError : Error {
    using Error::Error;
};

// constant part is not the expected reference form; run linear normalization first
struct NormalizeFirstError : Error {
    using Error::Error;
};

struct NotEquivariantError : Error {
    using Error::Error;
};

struct SingularityError : Error {
    using Error::Error;
};

struct NotPoissonError : Error {
    using Error::Error;
};

struct SplitFailureError : Error {
    int degree;
    SplitFailureError(const std::string& msg, int deg) : Error(msg), degree(deg) {}
};

struct IllPosedError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace liejet
