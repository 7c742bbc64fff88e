#pragma once

#include <stdexcept>
#include <string>

namespace qb {

// Invalid sizes, parameter combinations, malformed configs. CLI exit code 1.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Integrator blow-up, quadrature non-convergence, spectra outside tolerance. CLI exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qb
