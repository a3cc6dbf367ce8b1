#pragma once

#include <cmath>

#include "bdrymatern/common.hpp"

namespace bdry {

// Isotropic Matern kernel with half-integer smoothness, evaluated through the
// closed-form polynomial-times-exponential representations.
struct MaternParams {
    double nu;      // smoothness, one of 1/2, 3/2, 5/2, 7/2
    double kappa;   // inverse length-scale
    double sigma2;  // process variance

    void validate() const {
        if (!(kappa > 0.0) || !(sigma2 > 0.0))
            throw Error(ErrorCategory::config, "Matern parameters require kappa > 0 and sigma2 > 0");
        const int twice = static_cast<int>(std::lround(2.0 * nu));
        if (std::abs(2.0 * nu - twice) > 1e-12 || twice < 1 || twice > 7 || twice % 2 == 0)
            throw Error(ErrorCategory::config,
                        "unsupported smoothness: closed forms cover nu in {1/2, 3/2, 5/2, 7/2}");
    }
};

namespace detail {

inline double matern_radial(const MaternParams& p, double r) {
    const double t = p.kappa * r;
    const int twice = static_cast<int>(std::lround(2.0 * p.nu));
    double poly = 1.0;
    switch (twice) {
        case 1: poly = 1.0; break;
        case 3: poly = 1.0 + t; break;
        case 5: poly = 1.0 + t + t * t / 3.0; break;
        case 7: poly = 1.0 + t + 0.4 * t * t + t * t * t / 15.0; break;
        default:
            throw Error(ErrorCategory::config, "unsupported smoothness in matern evaluation");
    }
    return p.sigma2 * poly * std::exp(-t);
}

}  // namespace detail

inline double matern_eval(const MaternParams& p, const Vec& x, const Vec& y) {
    p.validate();
    if (x.size() != y.size())
        throw Error(ErrorCategory::precondition, "matern_eval: dimension mismatch");
    return detail::matern_radial(p, (x - y).norm());
}

inline double matern_eval1(const MaternParams& p, double x, double y) {
    return detail::matern_radial(p, std::abs(x - y));
}

struct LagDerivatives {
    double k;    // k(h)
    double dk;   // d/dh k(h), odd in h
    double d2k;  // d^2/dh^2 k(h), even in h
};

// Stationary-form derivatives of k(h) at a signed lag h. Requires nu >= 5/2 so
// the second derivative is finite at the origin.
inline LagDerivatives matern_lag_derivatives(const MaternParams& p, double h) {
    p.validate();
    const int twice = static_cast<int>(std::lround(2.0 * p.nu));
    if (twice < 5)
        throw Error(ErrorCategory::precondition,
                    "matern_lag_derivatives requires nu >= 5/2 for twice-differentiability");
    const double t = p.kappa * std::abs(h);
    const double sgn = (h > 0.0) ? 1.0 : (h < 0.0 ? -1.0 : 0.0);
    const double e = std::exp(-t);
    LagDerivatives out{};
    if (twice == 5) {
        out.k = p.sigma2 * (1.0 + t + t * t / 3.0) * e;
        out.dk = -p.sigma2 * p.kappa * e * (t + t * t) / 3.0 * sgn;
        out.d2k = p.sigma2 * p.kappa * p.kappa * e * (t * t - t - 1.0) / 3.0;
    } else {
        out.k = p.sigma2 * (1.0 + t + 0.4 * t * t + t * t * t / 15.0) * e;
        out.dk = -p.sigma2 * p.kappa * e * t * (3.0 + 3.0 * t + t * t) / 15.0 * sgn;
        out.d2k = p.sigma2 * p.kappa * p.kappa * e * (t * t * t - 3.0 * t - 3.0) / 15.0;
    }
    return out;
}

// Unnormalized spectral density (kappa^2 + |omega|^2)^{-(nu + d/2)}.
inline double matern_spectral_density(const MaternParams& p, const Vec& omega) {
    const double alpha = p.nu + 0.5 * static_cast<double>(omega.size());
    return std::pow(p.kappa * p.kappa + omega.squaredNorm(), -alpha);
}

// Cross-covariance matrix; rows of X and Y are points.
inline Mat matern_cross_matrix(const MaternParams& p, const Mat& X, const Mat& Y) {
    p.validate();
    if (X.cols() != Y.cols())
        throw Error(ErrorCategory::precondition, "matern_cross_matrix: dimension mismatch");
    Mat K(X.rows(), Y.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < Y.rows(); ++j)
            K(i, j) = detail::matern_radial(p, (X.row(i) - Y.row(j)).norm());
    return K;
}

}  // namespace bdry
