#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "bdrymatern/common.hpp"
#include "bdrymatern/matern.hpp"

namespace bdry {

// Endpoint condition for the 1-D operator (kappa^2 - d^2/dx^2) on [0,1].
// Robin here means g(e) + c g'(e) = 0 at both endpoints, with g' the
// one-sided coordinate derivative; neumann is g'(e) = 0.
struct Boundary1D {
    enum Kind { dirichlet, robin, neumann } kind = dirichlet;
    double c = 0.0;

    static Boundary1D make_dirichlet() { return {dirichlet, 0.0}; }
    static Boundary1D make_robin(double c) { return {robin, c}; }
    static Boundary1D make_neumann() { return {neumann, 0.0}; }
};

struct Grid1D {
    Vec nodes;
    double spacing;

    static Grid1D equispaced(int n) {
        if (n < 201)
            throw Error(ErrorCategory::precondition, "Grid1D requires at least 201 nodes");
        Grid1D g;
        g.nodes = Vec::LinSpaced(n, 0.0, 1.0);
        g.spacing = 1.0 / (n - 1);
        return g;
    }

    int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Second-order central differences inside, one-sided second-order stencils in
// the boundary rows.
inline Eigen::SparseMatrix<double> fd_operator(double kappa, const Boundary1D& b, const Grid1D& g) {
    const int n = g.size();
    const double h = g.spacing;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * n);
    for (int i = 1; i + 1 < n; ++i) {
        trip.emplace_back(i, i - 1, -1.0 / (h * h));
        trip.emplace_back(i, i, kappa * kappa + 2.0 / (h * h));
        trip.emplace_back(i, i + 1, -1.0 / (h * h));
    }
    const double d0 = -3.0 / (2.0 * h), d1 = 4.0 / (2.0 * h), d2 = -1.0 / (2.0 * h);
    switch (b.kind) {
        case Boundary1D::dirichlet:
            trip.emplace_back(0, 0, 1.0);
            trip.emplace_back(n - 1, n - 1, 1.0);
            break;
        case Boundary1D::robin:
            trip.emplace_back(0, 0, 1.0 + b.c * d0);
            trip.emplace_back(0, 1, b.c * d1);
            trip.emplace_back(0, 2, b.c * d2);
            trip.emplace_back(n - 1, n - 1, 1.0 - b.c * d0);
            trip.emplace_back(n - 1, n - 2, -b.c * d1);
            trip.emplace_back(n - 1, n - 3, -b.c * d2);
            break;
        case Boundary1D::neumann:
            trip.emplace_back(0, 0, d0);
            trip.emplace_back(0, 1, d1);
            trip.emplace_back(0, 2, d2);
            trip.emplace_back(n - 1, n - 1, -d0);
            trip.emplace_back(n - 1, n - 2, -d1);
            trip.emplace_back(n - 1, n - 3, -d2);
            break;
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

inline Eigen::SparseLU<Eigen::SparseMatrix<double>>& factorize(
    Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu, const Eigen::SparseMatrix<double>& A) {
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw Error(ErrorCategory::numeric, "singular finite-difference operator");
    return lu;
}

// Rows of the discrete Green's function at the requested node indices:
// W(i,:) = row idx[i] of A^{-1} with boundary source columns zeroed, scaled
// by 1/h so that sums against interior sources approximate integrals.
inline Mat green_rows(double kappa, const Boundary1D& b, const Grid1D& g,
                      const std::vector<int>& idx) {
    const int n = g.size();
    auto A = fd_operator(kappa, b, g);
    Eigen::SparseMatrix<double> At = A.transpose();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    factorize(lu, At);
    Mat W(static_cast<int>(idx.size()), n);
    Vec e = Vec::Zero(n);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        e.setZero();
        e[idx[r]] = 1.0;
        Vec row = lu.solve(e);
        row[0] = 0.0;
        row[n - 1] = 0.0;
        W.row(static_cast<int>(r)) = row.transpose() / g.spacing;
    }
    return W;
}

// Variance of the driving Matern-(nu-2) field that makes the double
// convolution with the unit-variance operator reproduce a target Matern-nu
// field of variance sigma2 (1-D spectral amplitude matching).
inline double base_field_variance(double nu, double kappa, double sigma2) {
    return sigma2 * std::pow(kappa, 4.0) * std::tgamma(nu - 2.0) * std::tgamma(nu + 0.5) /
           (std::tgamma(nu) * std::tgamma(nu - 1.5));
}

}  // namespace detail

// Dense discrete Green's function of (kappa^2 - d^2/dx^2) under the given
// endpoint rows, symmetrized.
inline Mat green_function_1d(double kappa, const Boundary1D& b, const Grid1D& g) {
    const int n = g.size();
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Mat G = detail::green_rows(kappa, b, g, all);
    G = 0.5 * (G + G.transpose()).eval();
    return G;
}

// Numeric 1-D boundary kernel via the double quadrature
//   k(x,x') = int int G(x,s) k_base(s,u) G(u,x') ds du,
// with k_base the Matern-(nu-2) kernel of the matched driving-field variance.
// Evaluated on the full grid.
inline Mat bdry_kernel_1d_numeric(double nu, double kappa, const Boundary1D& b, const Grid1D& g,
                                  double sigma2 = 1.0) {
    const int twice = static_cast<int>(std::lround(2.0 * (nu - 2.0)));
    if (twice != 1 && twice != 3)
        throw Error(ErrorCategory::config, "numeric boundary kernel needs nu in {5/2, 7/2}");
    const int n = g.size();
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Mat W = detail::green_rows(kappa, b, g, all);  // G rows, 1/h scaled
    MaternParams base{nu - 2.0, kappa, detail::base_field_variance(nu, kappa, sigma2)};
    Mat Kb(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Kb(i, j) = matern_eval1(base, g.nodes[i], g.nodes[j]);
    const double h2 = g.spacing * g.spacing;
    Mat K = h2 * (W * Kb * W.transpose());
    K = 0.5 * (K + K.transpose()).eval();
    return K;
}

// Same kernel restricted to the grid nodes listed in idx; avoids the dense
// N x N Green's matrix, so it is cheap enough for acceptance sweeps.
inline Mat bdry_kernel_1d_numeric_at(double nu, double kappa, const Boundary1D& b, const Grid1D& g,
                                     const std::vector<int>& idx, double sigma2 = 1.0) {
    const int twice = static_cast<int>(std::lround(2.0 * (nu - 2.0)));
    if (twice != 1 && twice != 3)
        throw Error(ErrorCategory::config, "numeric boundary kernel needs nu in {5/2, 7/2}");
    const int n = g.size();
    Mat W = detail::green_rows(kappa, b, g, idx);
    MaternParams base{nu - 2.0, kappa, detail::base_field_variance(nu, kappa, sigma2)};
    Mat Kb(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            Kb(i, j) = matern_eval1(base, g.nodes[i], g.nodes[j]);
    const double h2 = g.spacing * g.spacing;
    Mat T = W * Kb;  // |idx| x n
    Mat K = h2 * (T * W.transpose());
    K = 0.5 * (K + K.transpose()).eval();
    return K;
}

}  // namespace bdry
