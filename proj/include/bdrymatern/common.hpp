#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bdry {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCategory {
    config,        // malformed input / unsupported parameter
    precondition,  // caller violated a documented precondition
    numeric,       // factorization or conditioning failure
    simulation,    // stochastic scheme failed to terminate
    io,            // file read/write failure
};

inline const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::precondition: return "precondition";
        case ErrorCategory::numeric: return "numeric";
        case ErrorCategory::simulation: return "simulation";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

// Boundary membership tolerance shared by the geometric predicates.
inline constexpr double tol_geom = 1e-10;

}  // namespace bdry
