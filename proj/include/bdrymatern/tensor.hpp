#pragma once

#include <Eigen/Cholesky>
#include <cmath>
#include <vector>

#include "bdrymatern/common.hpp"
#include "bdrymatern/matern.hpp"
#include "bdrymatern/rng.hpp"

namespace bdry {

// Closed-form 1-D boundary Matern kernel on [0,1] under the endpoint family
//   f(e) + c f'(e) = 0,  e in {0,1},  c >= 0,
// with f' the coordinate derivative. c = 0 gives Dirichlet; the c -> infinity
// limit (pure Neumann, f'(e) = 0) is provided separately in closed form.
//
// Helper functions of the signed lag h:
//   K1(h) = k(h) - c k'(h),   K2(h) = k(h) - c^2 k''(h).

namespace detail {

struct Tensor1DTerms {
    double sh, ch;  // sinh(kappa), cosh(kappa)
};

inline double khp_robin(const MaternParams& p, double c, double x, double y) {
    const double kap = p.kappa;
    const double sh = std::sinh(kap);
    const auto K1 = [&](double h) {
        const LagDerivatives d = matern_lag_derivatives(p, h);
        return d.k - c * d.dk;
    };
    const double a = 1.0 + c * kap, b = 1.0 - c * kap;
    return 0.5 / sh *
           (K1(x - 1.0) * (std::exp(kap * y) / a - std::exp(-kap * y) / b) +
            K1(x) * (std::exp(kap * (1.0 - y)) / b - std::exp(-kap * (1.0 - y)) / a));
}

inline double khh_robin(const MaternParams& p, double c, double x, double y) {
    const double kap = p.kappa;
    const double sh = std::sinh(kap), ch = std::cosh(kap);
    const auto K2 = [&](double h) {
        const LagDerivatives d = matern_lag_derivatives(p, h);
        return d.k - c * c * d.d2k;
    };
    const double K20 = K2(0.0), K21 = K2(1.0);
    const double a = 1.0 + c * kap, b = 1.0 - c * kap;
    const double t1 = (ch * K20 - K21) * (std::exp(kap * (1.0 - x - y)) / (2.0 * b * b) +
                                          std::exp(-kap * (1.0 - x - y)) / (2.0 * a * a));
    const double t2 = (ch * K21 - K20) * std::cosh(kap * (x - y)) / (1.0 - c * c * kap * kap);
    return (t1 + t2) / (sh * sh);
}

inline double khp_neumann(const MaternParams& p, double x, double y) {
    const double kap = p.kappa;
    const double sh = std::sinh(kap);
    const auto dk = [&](double h) { return matern_lag_derivatives(p, h).dk; };
    return (dk(x) * std::cosh(kap * (1.0 - y)) - dk(x - 1.0) * std::cosh(kap * y)) / (kap * sh);
}

inline double khh_neumann(const MaternParams& p, double x, double y) {
    const double kap = p.kappa;
    const double sh = std::sinh(kap), ch = std::cosh(kap);
    const auto d2k = [&](double h) { return matern_lag_derivatives(p, h).d2k; };
    const double K0 = d2k(0.0), K1v = d2k(1.0);
    return ((K1v - ch * K0) * std::cosh(kap * (1.0 - x - y)) +
            (ch * K1v - K0) * std::cosh(kap * (x - y))) /
           (kap * kap * sh * sh);
}

inline void check_unit_interval(double x, double y) {
    if (x < -tol_geom || x > 1.0 + tol_geom || y < -tol_geom || y > 1.0 + tol_geom)
        throw Error(ErrorCategory::precondition, "1-D boundary kernel inputs must lie in [0,1]");
}

}  // namespace detail

inline double bdry_matern_1d(const MaternParams& p, double c, double x, double y) {
    p.validate();
    detail::check_unit_interval(x, y);
    if (c < 0.0)
        throw Error(ErrorCategory::config, "boundary coefficient c must be nonnegative");
    if (std::abs(1.0 - c * p.kappa) < 1e-8 || std::abs(1.0 + c * p.kappa) < 1e-8)
        throw Error(ErrorCategory::config,
                    "boundary kernel undefined at the pole c*kappa = 1; perturb c or kappa");
    return matern_eval1(p, x, y) - detail::khp_robin(p, c, x, y) - detail::khp_robin(p, c, y, x) +
           detail::khh_robin(p, c, x, y);
}

inline double bdry_matern_1d_neumann(const MaternParams& p, double x, double y) {
    p.validate();
    detail::check_unit_interval(x, y);
    return matern_eval1(p, x, y) - detail::khp_neumann(p, x, y) - detail::khp_neumann(p, y, x) +
           detail::khh_neumann(p, x, y);
}

// Per-dimension endpoint condition for the tensor kernel.
struct TensorBoundary {
    enum Kind {
        free_kind,     // no boundary correction in this dimension (plain Matern factor)
        robin_kind,    // f + c f' = 0 with c >= 0 (c = 0 is Dirichlet)
        neumann_kind,  // f' = 0 (the c -> infinity limit)
    } kind = robin_kind;
    double c = 0.0;

    static TensorBoundary dirichlet() { return {robin_kind, 0.0}; }
    static TensorBoundary robin(double c) { return {robin_kind, c}; }
    static TensorBoundary neumann() { return {neumann_kind, 0.0}; }
    static TensorBoundary free() { return {free_kind, 0.0}; }
};

struct TensorParams {
    MaternParams base;                      // shared smoothness/scale/variance
    std::vector<TensorBoundary> bounds;     // one entry per dimension

    int dim() const { return static_cast<int>(bounds.size()); }

    void validate() const {
        base.validate();
        if (base.nu <= 2.0)
            throw Error(ErrorCategory::config, "tensor boundary kernel requires nu > 2");
        if (bounds.empty())
            throw Error(ErrorCategory::config, "tensor kernel needs at least one dimension");
        for (const auto& b : bounds)
            if (b.kind == TensorBoundary::robin_kind && b.c < 0.0)
                throw Error(ErrorCategory::config, "tensor boundary coefficients must be >= 0");
    }
};

inline double bdry_matern_1d(const MaternParams& p, const TensorBoundary& b, double x, double y) {
    switch (b.kind) {
        case TensorBoundary::free_kind: return matern_eval1(p, x, y);
        case TensorBoundary::robin_kind: return bdry_matern_1d(p, b.c, x, y);
        case TensorBoundary::neumann_kind: return bdry_matern_1d_neumann(p, x, y);
    }
    throw Error(ErrorCategory::config, "unknown tensor boundary kind");
}

// Product kernel on [0,1]^d. The variance parameter multiplies the product
// once, so each 1-D factor is evaluated at unit variance.
inline double tensor_kernel_eval(const TensorParams& tp, const Vec& x, const Vec& y) {
    tp.validate();
    if (x.size() != tp.dim() || y.size() != tp.dim())
        throw Error(ErrorCategory::precondition, "tensor_kernel_eval: dimension mismatch");
    MaternParams unit = tp.base;
    unit.sigma2 = 1.0;
    double prod = tp.base.sigma2;
    for (int l = 0; l < tp.dim(); ++l) {
        prod *= bdry_matern_1d(unit, tp.bounds[l], x[l], y[l]);
        if (prod == 0.0) break;
    }
    return prod;
}

// Draw one zero-mean sample path on a 1-D grid via an SPD factorization with
// jitter escalation from 1e-10*sigma2 to 1e-6*sigma2.
inline Vec sample_path_1d(const MaternParams& p, const TensorBoundary& b, const Vec& grid,
                          RngStream& rng) {
    p.validate();
    if (grid.size() < 1 || grid.size() > 2000)
        throw Error(ErrorCategory::precondition, "sample_path_1d grid must have 1..2000 nodes");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCategory::precondition, "sample_path_1d grid must be strictly increasing");
    const Eigen::Index n = grid.size();
    Mat K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = bdry_matern_1d(p, b, grid[i], grid[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
    Vec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
    double jitter = 1e-10 * p.sigma2;
    while (true) {
        Mat Kj = K + jitter * Mat::Identity(n, n);
        Eigen::LLT<Mat> llt(Kj);
        if (llt.info() == Eigen::Success) return llt.matrixL() * z;
        jitter *= 10.0;
        if (jitter > 1e-6 * p.sigma2)
            throw Error(ErrorCategory::numeric,
                        "sample_path_1d: covariance not factorizable even with escalated jitter");
    }
}

}  // namespace bdry
