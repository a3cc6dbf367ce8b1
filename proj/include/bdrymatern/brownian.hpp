#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bdrymatern/common.hpp"
#include "bdrymatern/domain.hpp"
#include "bdrymatern/rng.hpp"

namespace bdry {

// Euler simulation of Brownian motion with generator Laplacian (increments
// sqrt(2 dt) Z), killed at the boundary for the Dirichlet functionals and
// specularly reflected with boundary local time for the Robin functionals.

struct SimConfig {
    double dt;
    double weight_floor = 1e-6;  // truncate reflected paths once the discount falls below
    double max_time;
    double boundary_layer;  // band width for the occupation-based local-time cross-check

    static SimConfig defaults(const Domain& d) {
        SimConfig c;
        const double diam2 = d.diameter() * d.diameter();
        c.dt = 1e-4 * diam2;
        c.max_time = 1e3 * diam2;
        c.boundary_layer = 4.0 * std::sqrt(c.dt);
        return c;
    }

    void validate(const Domain& d) const {
        const double diam2 = d.diameter() * d.diameter();
        if (!(dt > 0.0) || dt > 1e-2 * diam2)
            throw Error(ErrorCategory::config, "SimConfig: dt must satisfy 0 < dt <= 1e-2*diam^2");
        if (!(weight_floor > 0.0 && weight_floor < 1.0))
            throw Error(ErrorCategory::config, "SimConfig: weight_floor must lie in (0,1)");
        if (!(max_time > 0.0) || !(boundary_layer > 0.0))
            throw Error(ErrorCategory::config, "SimConfig: max_time and boundary_layer must be positive");
    }
};

struct HittingSample {
    BoundaryPoint exit_location;
    double exit_time = 0.0;
};

namespace detail {

// first crossing of the segment from inside to outside, by bisection on contains()
inline double crossing_fraction(const Domain& dom, const Vec& inside, const Vec& outside) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dom.contains(inside + mid * (outside - inside)))
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace detail

// One killed-BM draw: exit location on the boundary and linearly interpolated
// exit time. Boundary starts exit immediately with tau = 0.
inline HittingSample simulate_hitting(const Domain& dom, const Vec& x0, const SimConfig& config,
                                      RngStream& rng) {
    config.validate(dom);
    if (!dom.contains(x0))
        throw Error(ErrorCategory::precondition, "simulate_hitting: start point outside domain");
    if (dom.distance_to_boundary(x0) <= tol_geom)
        return {dom.project_to_boundary(x0), 0.0};

    const int d = dom.dim();
    const double step = std::sqrt(2.0 * config.dt);
    Vec x = x0, xn(d);
    double t = 0.0;
    while (t < config.max_time) {
        for (int i = 0; i < d; ++i) xn[i] = x[i] + step * rng.normal();
        if (!dom.contains(xn)) {
            const double s = detail::crossing_fraction(dom, x, xn);
            HittingSample out;
            out.exit_location = dom.project_to_boundary(x + s * (xn - x));
            out.exit_time = t + s * config.dt;
            return out;
        }
        x = xn;
        t += config.dt;
    }
    throw Error(ErrorCategory::simulation, "simulate_hitting: max_time exceeded without exit");
}

// Closed-form Dirichlet exit weights on (0,1) under the generator-Laplacian
// clock: w0 = E[e^{-kappa^2 tau} 1{exit at 0}], w1 likewise at 1.
inline std::pair<double, double> dirichlet_exit_weight_1d(double x0, double kappa) {
    if (!(x0 > 0.0 && x0 < 1.0))
        throw Error(ErrorCategory::precondition, "dirichlet_exit_weight_1d needs x0 in (0,1)");
    if (kappa <= 0.0)
        throw Error(ErrorCategory::config, "dirichlet_exit_weight_1d needs kappa > 0");
    const double s = std::sinh(kappa);
    return {std::sinh(kappa * (1.0 - x0)) / s, std::sinh(kappa * x0) / s};
}

struct BoundaryEvent {
    BoundaryPoint point;
    double time;        // contact time along the path
    double dL;          // local-time increment (twice the reflection overshoot)
    double lambda_mid;  // int c dL up to the contact, with half of this contact's share
    double weight;      // e^{-kappa^2 time - lambda_mid} * dL at the build kappa
};

struct ReflectedFunctional {
    std::vector<BoundaryEvent> events;
    double build_kappa = 0.0;

    // weights re-discounted at a different kappa; the stored (time, lambda)
    // data make the events reusable across inverse length-scales
    std::vector<double> weights_for(double kappa) const {
        std::vector<double> w(events.size());
        for (std::size_t i = 0; i < events.size(); ++i)
            w[i] = std::exp(-kappa * kappa * events[i].time - events[i].lambda_mid) * events[i].dL;
        return w;
    }

    double weight_sum() const {
        double s = 0.0;
        for (const auto& e : events) s += e.weight;
        return s;
    }
};

// Reflected BM with discounted boundary local time. Each reflection of
// overshoot depth eta contributes dL = 2*eta (the half-space identity
// |x + dW| = (x + dW) + 2*(x + dW)^-), the discount decays by e^{-kappa^2 dt}
// per step and e^{-c(b) dL} per contact, and the contact weight applies half
// of its own kill (midpoint rule). Terminates once the discount drops below
// weight_floor.
inline ReflectedFunctional simulate_reflected_with_local_time(
    const Domain& dom, const Vec& x0, double kappa, const std::function<double(const Vec&)>& c,
    const SimConfig& config, RngStream& rng) {
    config.validate(dom);
    if (!dom.contains(x0))
        throw Error(ErrorCategory::precondition, "simulate_reflected: start point outside domain");
    if (kappa <= 0.0) throw Error(ErrorCategory::config, "simulate_reflected: kappa must be > 0");

    const int d = dom.dim();
    const double step = std::sqrt(2.0 * config.dt);
    const double log_floor = std::log(config.weight_floor);

    ReflectedFunctional out;
    out.build_kappa = kappa;
    Vec x = x0, xn(d);
    double t = 0.0;
    double lambda = 0.0;  // accumulated int c dL

    while (true) {
        if (-kappa * kappa * t - lambda < log_floor) return out;
        if (t >= config.max_time)
            throw Error(ErrorCategory::simulation,
                        "simulate_reflected: max_time exceeded before weight_floor truncation");
        for (int i = 0; i < d; ++i) xn[i] = x[i] + step * rng.normal();
        t += config.dt;
        int bounce = 0;
        while (!dom.contains(xn)) {
            const BoundaryPoint b = dom.project_to_boundary(xn);
            const double eta = (xn - b.location).norm();
            const double cb = c(b.location);
            if (cb < 0.0)
                throw Error(ErrorCategory::precondition, "simulate_reflected: c(b) must be >= 0");
            const double dL = 2.0 * eta;
            BoundaryEvent ev;
            ev.point = b;
            ev.time = t;
            ev.dL = dL;
            ev.lambda_mid = lambda + 0.5 * cb * dL;
            ev.weight = std::exp(-kappa * kappa * t - ev.lambda_mid) * dL;
            out.events.push_back(ev);
            lambda += cb * dL;

            // specular reflection across the tangent plane at b
            const double depth = (xn - b.location).dot(b.inward_normal);
            xn -= 2.0 * depth * b.inward_normal;
            if (++bounce > 16) {
                xn = b.location + std::max(eta, 16.0 * tol_geom) * b.inward_normal;
                if (!dom.contains(xn))
                    throw Error(ErrorCategory::simulation,
                                "simulate_reflected: reflection failed to re-enter the domain");
                break;
            }
        }
        x = xn;
    }
}

// Empirical mean accumulated local time E[L_t] for each horizon in t_grid
// (sorted ascending), for a reflected path started at x0, averaged over
// n_paths. One simulation per path serves every horizon.
inline std::vector<double> local_time_mean_curve(const Domain& dom, const Vec& x0,
                                                 const std::vector<double>& t_grid, int n_paths,
                                                 const SimConfig& config, RngStream& rng) {
    config.validate(dom);
    if (t_grid.empty())
        throw Error(ErrorCategory::precondition, "local_time_mean_curve: empty horizon grid");
    const int d = dom.dim();
    const double step = std::sqrt(2.0 * config.dt);
    const double t_max = t_grid.back();
    std::vector<double> acc(t_grid.size(), 0.0);
    for (int p = 0; p < n_paths; ++p) {
        RngStream r = rng.child(static_cast<std::uint64_t>(p));
        Vec x = x0, xn(d);
        double t = 0.0, L = 0.0;
        std::size_t gi = 0;
        while (t < t_max && gi < t_grid.size()) {
            for (int i = 0; i < d; ++i) xn[i] = x[i] + step * r.normal();
            t += config.dt;
            int bounce = 0;
            while (!dom.contains(xn)) {
                const BoundaryPoint b = dom.project_to_boundary(xn);
                const double eta = (xn - b.location).norm();
                L += 2.0 * eta;
                const double depth = (xn - b.location).dot(b.inward_normal);
                xn -= 2.0 * depth * b.inward_normal;
                if (++bounce > 16) {
                    xn = b.location + std::max(eta, 16.0 * tol_geom) * b.inward_normal;
                    break;
                }
            }
            x = xn;
            while (gi < t_grid.size() && t >= t_grid[gi]) acc[gi++] += L;
        }
        // paths that end exactly at t_max still credit the last horizons
        while (gi < t_grid.size()) acc[gi++] += L;
    }
    for (double& a : acc) a /= n_paths;
    return acc;
}

// Estimate of sup_x E[L_t] at one horizon: maximum of the empirical means
// over a coarse grid of interior start points plus near-boundary offsets of
// the same points (the supremum is approached near the boundary).
inline double local_time_expectation_estimate(const Domain& dom, double t_horizon, int n_paths,
                                              const SimConfig& config, RngStream& rng) {
    if (n_paths < 100)
        throw Error(ErrorCategory::precondition, "local_time_expectation_estimate needs n_paths >= 100");
    RngStream sampler = rng.child(0xA11CE);
    const Mat starts = dom.sample_uniform(4, sampler);
    const double offset = 2.0 * std::sqrt(2.0 * config.dt);
    std::vector<Vec> grid;
    for (int i = 0; i < starts.rows(); ++i) {
        Vec s = starts.row(i).transpose();
        grid.push_back(s);
        const BoundaryPoint b = dom.project_to_boundary(s);
        Vec near = b.location + offset * b.inward_normal;
        if (dom.contains(near)) grid.push_back(near);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RngStream r = rng.child(i + 1);
        const auto curve = local_time_mean_curve(dom, grid[i], {t_horizon}, n_paths, config, r);
        best = std::max(best, curve[0]);
    }
    return best;
}

}  // namespace bdry
