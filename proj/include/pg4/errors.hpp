#ifndef PG4_ERRORS_HPP
#define PG4_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pg4 {

// Base class for all library errors so callers can catch pg4 failures
// separately from generic std exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Curve's first coordinate derivative vanishes (or is not unit for a curve
// that claims arc-length parameterization).
class NotAdmissible : public Error {
public:
    explicit NotAdmissible(const std::string& msg) : Error(msg) {}
};

// kappa or tau fell below its degeneracy threshold; carries the grid index
// where the frame construction broke down (-1 if not grid-based).
class FrenetDegenerate : public Error {
public:
    FrenetDegenerate(const std::string& msg, long index = -1)
        : Error(msg), grid_index(index) {}
    long grid_index;
};

// The vector that should be normalized is nonzero but null, so no unit
// frame vector exists in its direction.
class LightlikeDegeneracy : public Error {
public:
    LightlikeDegeneracy(const std::string& msg, long index = -1)
        : Error(msg), grid_index(index) {}
    long grid_index;
};

// Time-derivative estimation needs at least 3 stored states.
class InsufficientHistory : public Error {
public:
    explicit InsufficientHistory(const std::string& msg) : Error(msg) {}
};

// A time step produced a non-finite position; carries the failing step.
class StepRejected : public Error {
public:
    StepRejected(const std::string& msg, long step = -1)
        : Error(msg), step_index(step) {}
    long step_index;
};

// Frame integration drifted away from its pseudo-orthonormal Gram matrix.
class GramDrift : public Error {
public:
    GramDrift(const std::string& msg, double drift = 0.0)
        : Error(msg), max_deviation(drift) {}
    double max_deviation;
};

class GridTooSmall : public Error {
public:
    explicit GridTooSmall(const std::string& msg) : Error(msg) {}
};

class NormTooLarge : public Error {
public:
    explicit NormTooLarge(const std::string& msg) : Error(msg) {}
};

class DomainOutOfRange : public Error {
public:
    explicit DomainOutOfRange(const std::string& msg) : Error(msg) {}
};

// Malformed input files / parameters.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

} // namespace pg4

#endif
