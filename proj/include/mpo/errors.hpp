#pragma once

#include <stdexcept>
#include <string>

namespace mpo {

// Input outside the mathematical domain of an operation (alpha <= 0, P_out <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// State left the regime where the third-order field equations apply.
class ValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |E_f| collapsed to (numerically) zero inside the field equations.
class SingularStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual, int iterations)
        : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mpo
