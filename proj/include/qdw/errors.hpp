#pragma once

#include <stdexcept>
#include <string>

namespace qdw {

// Input that violates a documented precondition (bad parameters, malformed
// matrices, states outside the physical set).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An internal consistency check failed (e.g. two algebraically equal
// expressions disagree beyond tolerance, or a solver did not converge).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qdw
