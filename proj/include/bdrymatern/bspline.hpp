#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "bdrymatern/common.hpp"

namespace bdry {

namespace detail {

// cardinal B-spline on the half-open base indicator; exact piecewise
// polynomial via the uniform-knot recurrence
inline double cardinal_bspline(int s, double x) {
    if (x <= 0.0 || x >= s + 1.0) {
        if (s == 0) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
        return 0.0;
    }
    if (s == 0) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    return (x * cardinal_bspline(s - 1, x) + (s + 1.0 - x) * cardinal_bspline(s - 1, x - 1.0)) / s;
}

}  // namespace detail

// N_s = (s+1)-fold convolution of the unit indicator; support [0, s+1].
// The s = 0 case is the closed indicator of [0,1].
inline double bspline_1d(int s, double x) {
    if (s < 0) throw Error(ErrorCategory::config, "bspline_1d: order must be >= 0");
    if (s == 0) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    return detail::cardinal_bspline(s, x);
}

// Tensor B-spline basis on [0,1]^d with index set {-s,...,2^zeta}^d. Member
// j has support [0, 2^{-zeta}(s+1)]^d + j 2^{-zeta}.
struct BSplineBasis {
    int order_s;
    int degree_zeta;
    int dim;

    BSplineBasis(int s, int zeta, int d) : order_s(s), degree_zeta(zeta), dim(d) {
        if (s < 1 || zeta < 0 || d < 1)
            throw Error(ErrorCategory::config, "BSplineBasis requires s >= 1, zeta >= 0, d >= 1");
    }

    int per_dim() const { return (1 << degree_zeta) + order_s + 1; }  // j in [-s, 2^zeta]

    long size() const {
        long q = 1;
        for (int l = 0; l < dim; ++l) q *= per_dim();
        return q;
    }

    // flattened index of the multi-index j (each entry in [-s, 2^zeta])
    long flatten(const std::vector<int>& j) const {
        long idx = 0, stride = 1;
        for (int l = 0; l < dim; ++l) {
            idx += static_cast<long>(j[l] + order_s) * stride;
            stride *= per_dim();
        }
        return idx;
    }

    std::vector<int> unflatten(long q) const {
        std::vector<int> j(dim);
        for (int l = 0; l < dim; ++l) {
            j[l] = static_cast<int>(q % per_dim()) - order_s;
            q /= per_dim();
        }
        return j;
    }
};

// Smallest order satisfying the approximation-rate requirement s > nu + d/2 + 1/2.
inline int default_spline_order(double nu, int d) {
    const double bound = nu + 0.5 * d + 0.5;
    return std::max(static_cast<int>(std::floor(bound)) + 1, 1);
}

// degree rule zeta = floor(log2(m) / (2 nu + 2 d))
inline int choose_degree(long m, double nu, int d) {
    if (m < 2) throw Error(ErrorCategory::precondition, "choose_degree requires m >= 2");
    return static_cast<int>(std::floor(std::log2(static_cast<double>(m)) / (2.0 * nu + 2.0 * d)));
}

struct RecommendedM {
    long long value;
    bool capped;
};

// rule-of-thumb inducing count m = ceil(n^{(2 nu + d)/d}), capped at 2^53
inline RecommendedM recommended_m(long n, double nu, int d) {
    if (n < 1) throw Error(ErrorCategory::precondition, "recommended_m requires n >= 1");
    const double expo = (2.0 * nu + d) / d;
    const double logm = expo * std::log2(static_cast<double>(n));
    if (logm > 53.0) return {static_cast<long long>(1) << 53, true};
    return {static_cast<long long>(std::ceil(std::pow(static_cast<double>(n), expo))), false};
}

// Sparse evaluation of the basis vector at x in [0,1]^d: at most (2s)^d
// nonzero entries (indices paired with values).
inline std::vector<std::pair<long, double>> basis_vector(const BSplineBasis& basis, const Vec& x) {
    if (x.size() != basis.dim)
        throw Error(ErrorCategory::precondition, "basis_vector: dimension mismatch");
    for (int l = 0; l < basis.dim; ++l)
        if (x[l] < -tol_geom || x[l] > 1.0 + tol_geom)
            throw Error(ErrorCategory::precondition, "basis_vector: point outside the unit cube");

    const int s = basis.order_s;
    const double scale = static_cast<double>(1 << basis.degree_zeta);
    const int jmax = 1 << basis.degree_zeta;

    std::vector<std::vector<std::pair<int, double>>> per_dim(basis.dim);
    for (int l = 0; l < basis.dim; ++l) {
        const double y = scale * std::min(std::max(x[l], 0.0), 1.0);
        const int j_lo = std::max(static_cast<int>(std::ceil(y - s - 1.0)), -s);
        const int j_hi = std::min(static_cast<int>(std::floor(y)), jmax);
        for (int j = j_lo; j <= j_hi; ++j) {
            const double v = bspline_1d(s, y - j);
            if (v != 0.0) per_dim[l].emplace_back(j, v);
        }
    }

    std::vector<std::pair<long, double>> out;
    for (int l = 0; l < basis.dim; ++l)
        if (per_dim[l].empty()) return out;
    std::vector<int> idx(basis.dim, 0);
    std::vector<int> j(basis.dim);
    while (true) {
        double v = 1.0;
        for (int l = 0; l < basis.dim; ++l) {
            j[l] = per_dim[l][idx[l]].first;
            v *= per_dim[l][idx[l]].second;
        }
        out.emplace_back(basis.flatten(j), v);
        int l = 0;
        while (l < basis.dim) {
            if (++idx[l] < static_cast<int>(per_dim[l].size())) break;
            idx[l] = 0;
            ++l;
        }
        if (l == basis.dim) break;
    }
    return out;
}

}  // namespace bdry
