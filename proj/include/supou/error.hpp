#pragma once

#include <stdexcept>
#include <string>

namespace supou {

// Bad parameter values handed to a closed form or constructor.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Missing or malformed configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative solver or optimizer did not reach its tolerance (CLI exit code 3).
struct convergence_error : std::runtime_error {
    convergence_error(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved(achieved) {}
    double achieved;
};

// File could not be read or written, or its contents are unusable (CLI exit code 4).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace supou
