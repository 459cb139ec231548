#pragma once

#include <stdexcept>
#include <string>

namespace mclump {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input: bad row sums, negative probabilities,
// dimension mismatches, values outside their documented range.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// A configured size cap would be exceeded (state enumeration, product
// graphs, exact solvers). The message names the cap that was hit.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(what) {}
};

// An iterative method ran out of its iteration budget. Carries the last
// iterate and the residual at the point of failure.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_value, double residual)
        : Error(what), last_value(last_value), residual(residual) {}

    double last_value;
    double residual;
};

}  // namespace mclump
