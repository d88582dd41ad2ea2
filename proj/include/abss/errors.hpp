#pragma once

#include <stdexcept>
#include <string>

namespace abss {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidInitialization : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedShape : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested steplength belongs to a skipped (dependent) row.
struct NoSteplength : std::logic_error {
    using std::logic_error::logic_error;
};

// a_i^T p_i vanished after fallback; the recursion cannot divide.
struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Monte Carlo sample hit a code path the analytic solve ruled out.
struct OracleInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace abss
