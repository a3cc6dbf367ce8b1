#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdrymatern/common.hpp"
#include "bdrymatern/rng.hpp"

namespace bdry {

struct BoundaryPoint {
    Vec location;
    Vec inward_normal;
};

// Bounded domains with piecewise-smooth boundaries: the built-in shapes used
// by the experiments plus a user-supplied signed-distance domain. Domains are
// closed sets; boundary points are members. Immutable after construction.
class Domain {
public:
    enum class Kind {
        interval01,
        hypercube,
        t_shape,         // the union ([-1,1]x[0,1]) U ([-0.5,0.5]x[0,1]) taken literally
        t_shape_figure,  // bar [-1,1]x[0,1] with stem [-0.5,0.5]x[-1,0]
        ring,
        disk,
        holed_rectangle,
        user_implicit,
    };

    static Domain interval01() { return Domain(Kind::interval01, 1); }

    static Domain hypercube(int dim) {
        if (dim < 1) throw Error(ErrorCategory::config, "hypercube dimension must be >= 1");
        return Domain(Kind::hypercube, dim);
    }

    static Domain t_shape() {
        Domain d(Kind::t_shape, 2);
        d.poly_ = {{-1, 0}, {1, 0}, {1, 1}, {-1, 1}};
        return d;
    }

    static Domain t_shape_figure() {
        Domain d(Kind::t_shape_figure, 2);
        d.poly_ = {{-1, 0}, {-0.5, 0}, {-0.5, -1}, {0.5, -1}, {0.5, 0}, {1, 0}, {1, 1}, {-1, 1}};
        return d;
    }

    static Domain ring(double r_inner = 1.0, double r_outer = 2.0) {
        if (!(0.0 < r_inner && r_inner < r_outer))
            throw Error(ErrorCategory::config, "ring requires 0 < r_inner < r_outer");
        Domain d(Kind::ring, 2);
        d.r1_ = r_inner;
        d.r2_ = r_outer;
        return d;
    }

    static Domain disk(double radius = 1.0) {
        if (!(radius > 0.0)) throw Error(ErrorCategory::config, "disk radius must be positive");
        Domain d(Kind::disk, 2);
        d.r1_ = radius;
        return d;
    }

    static Domain holed_rectangle() {
        Domain d(Kind::holed_rectangle, 2);
        d.poly_ = {{-1, -1}, {1, -1}, {1, 0.5}, {-1, 0.5}};
        d.hole_center_ = Eigen::Vector2d(0.5, -0.5);
        d.hole_radius_ = 0.25;
        return d;
    }

    // sdf <= 0 inside, |sdf| approximately the boundary distance.
    static Domain user_implicit(int dim, std::function<double(const Vec&)> sdf, Vec lo, Vec hi) {
        if (dim < 1 || lo.size() != dim || hi.size() != dim)
            throw Error(ErrorCategory::config, "user_implicit: inconsistent dimensions");
        for (int i = 0; i < dim; ++i)
            if (!(lo[i] < hi[i]))
                throw Error(ErrorCategory::config, "user_implicit: empty bounding box");
        Domain d(Kind::user_implicit, dim);
        d.sdf_ = std::move(sdf);
        d.lo_ = std::move(lo);
        d.hi_ = std::move(hi);
        return d;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    std::pair<Vec, Vec> bounding_box() const {
        Vec lo(dim_), hi(dim_);
        switch (kind_) {
            case Kind::interval01:
            case Kind::hypercube:
                lo.setZero();
                hi.setOnes();
                break;
            case Kind::t_shape:
                lo << -1, 0; hi << 1, 1;
                break;
            case Kind::t_shape_figure:
                lo << -1, -1; hi << 1, 1;
                break;
            case Kind::ring:
                lo << -r2_, -r2_; hi << r2_, r2_;
                break;
            case Kind::disk:
                lo << -r1_, -r1_; hi << r1_, r1_;
                break;
            case Kind::holed_rectangle:
                lo << -1, -1; hi << 1, 0.5;
                break;
            case Kind::user_implicit:
                lo = lo_; hi = hi_;
                break;
        }
        return {lo, hi};
    }

    double diameter() const {
        auto [lo, hi] = bounding_box();
        return (hi - lo).norm();
    }

    bool contains(const Vec& x) const {
        check_dim(x);
        switch (kind_) {
            case Kind::interval01:
                return x[0] >= -tol_geom && x[0] <= 1.0 + tol_geom;
            case Kind::hypercube:
                for (int i = 0; i < dim_; ++i)
                    if (x[i] < -tol_geom || x[i] > 1.0 + tol_geom) return false;
                return true;
            case Kind::t_shape:
                return in_rect(x, -1, 1, 0, 1) || in_rect(x, -0.5, 0.5, 0, 1);
            case Kind::t_shape_figure:
                return in_rect(x, -1, 1, 0, 1) || in_rect(x, -0.5, 0.5, -1, 0);
            case Kind::ring: {
                const double r = x.head(2).norm();
                return r >= r1_ - tol_geom && r <= r2_ + tol_geom;
            }
            case Kind::disk:
                return x.head(2).norm() <= r1_ + tol_geom;
            case Kind::holed_rectangle: {
                if (!in_rect(x, -1, 1, -1, 0.5)) return false;
                const double rh = (x.head(2) - hole_center_.head(2)).norm();
                return rh >= hole_radius_ - tol_geom;
            }
            case Kind::user_implicit:
                return sdf_(x) <= tol_geom;
        }
        return false;
    }

    double distance_to_boundary(const Vec& x) const {
        if (!contains(x))
            throw Error(ErrorCategory::precondition, "distance_to_boundary: point outside domain");
        return std::max(0.0, unsigned_boundary_distance(x));
    }

    // Nearest boundary point with its inward normal. Defined for any point in
    // the bounding box (also for points just outside the domain, which the
    // path simulators rely on). Ties go to the lexicographically smallest
    // location, then the lexicographically smallest normal.
    BoundaryPoint project_to_boundary(const Vec& x) const {
        check_dim(x);
        switch (kind_) {
            case Kind::interval01: {
                BoundaryPoint b;
                b.location = Vec(1);
                b.inward_normal = Vec(1);
                if (x[0] <= 0.5) { b.location[0] = 0.0; b.inward_normal[0] = 1.0; }
                else { b.location[0] = 1.0; b.inward_normal[0] = -1.0; }
                return b;
            }
            case Kind::hypercube:
                return project_box(x, Vec::Zero(dim_), Vec::Ones(dim_));
            case Kind::t_shape:
            case Kind::t_shape_figure:
                return project_polygon(x);
            case Kind::disk: {
                const Eigen::Vector2d p = x.head(2);
                const double r = p.norm();
                Eigen::Vector2d dir = (r > 1e-300) ? Eigen::Vector2d(p / r) : Eigen::Vector2d(-1.0, 0.0);
                BoundaryPoint b;
                b.location = dir * r1_;
                b.inward_normal = -dir;
                return b;
            }
            case Kind::ring: {
                const Eigen::Vector2d p = x.head(2);
                const double r = p.norm();
                Eigen::Vector2d dir = (r > 1e-300) ? Eigen::Vector2d(p / r) : Eigen::Vector2d(-1.0, 0.0);
                const double din = std::abs(r - r1_), dout = std::abs(r2_ - r);
                BoundaryPoint b;
                if (din <= dout) { b.location = dir * r1_; b.inward_normal = dir; }
                else { b.location = dir * r2_; b.inward_normal = -dir; }
                return b;
            }
            case Kind::holed_rectangle: {
                BoundaryPoint rect = project_polygon(x);
                const Eigen::Vector2d p = x.head(2);
                const Eigen::Vector2d d = p - hole_center_;
                const double r = d.norm();
                Eigen::Vector2d dir = (r > 1e-300) ? Eigen::Vector2d(d / r) : Eigen::Vector2d(-1.0, 0.0);
                const double dist_hole = std::abs(r - hole_radius_);
                const double dist_rect = (rect.location - x).norm();
                if (dist_hole < dist_rect - 1e-15) {
                    BoundaryPoint b;
                    b.location = hole_center_ + dir * hole_radius_;
                    b.inward_normal = dir;  // away from the hole is into the domain
                    return b;
                }
                return rect;
            }
            case Kind::user_implicit:
                return project_implicit(x);
        }
        throw Error(ErrorCategory::config, "project_to_boundary: unknown domain kind");
    }

    // m i.i.d. uniform points by rejection from the bounding box; rows are
    // points. Errors out if the acceptance rate collapses below 1e-4.
    Mat sample_uniform(int m, RngStream& rng) const {
        if (m < 1) throw Error(ErrorCategory::precondition, "sample_uniform requires m >= 1");
        auto [lo, hi] = bounding_box();
        Mat out(m, dim_);
        long attempts = 0, accepted = 0;
        Vec x(dim_);
        while (accepted < m) {
            for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lo[i], hi[i]);
            ++attempts;
            if (contains(x)) {
                out.row(accepted++) = x.transpose();
            } else if (attempts >= 100000 &&
                       static_cast<double>(accepted) < 1e-4 * static_cast<double>(attempts)) {
                throw Error(ErrorCategory::simulation,
                            "sample_uniform: acceptance rate below 1e-4; malformed domain?");
            }
        }
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
            case Kind::interval01: j["kind"] = "interval01"; break;
            case Kind::hypercube: j["kind"] = "hypercube"; j["dim"] = dim_; break;
            case Kind::t_shape: j["kind"] = "t_shape"; break;
            case Kind::t_shape_figure: j["kind"] = "t_shape_figure"; break;
            case Kind::ring: j["kind"] = "ring"; j["r_inner"] = r1_; j["r_outer"] = r2_; break;
            case Kind::disk: j["kind"] = "disk"; j["radius"] = r1_; break;
            case Kind::holed_rectangle: j["kind"] = "holed_rectangle"; break;
            case Kind::user_implicit:
                throw Error(ErrorCategory::config, "user_implicit domains are not serializable");
        }
        return j;
    }

    static Domain from_json(const nlohmann::json& j) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "interval01") return interval01();
        if (kind == "hypercube") return hypercube(j.at("dim").get<int>());
        if (kind == "t_shape") return t_shape();
        if (kind == "t_shape_figure") return t_shape_figure();
        if (kind == "ring") return ring(j.value("r_inner", 1.0), j.value("r_outer", 2.0));
        if (kind == "disk") return disk(j.value("radius", 1.0));
        if (kind == "holed_rectangle") return holed_rectangle();
        throw Error(ErrorCategory::config, "unknown domain kind: " + kind);
    }

private:
    Domain(Kind k, int dim) : kind_(k), dim_(dim) {}

    void check_dim(const Vec& x) const {
        if (x.size() != dim_)
            throw Error(ErrorCategory::precondition, "point dimension does not match domain");
    }

    static bool in_rect(const Vec& x, double x0, double x1, double y0, double y1) {
        return x[0] >= x0 - tol_geom && x[0] <= x1 + tol_geom && x[1] >= y0 - tol_geom &&
               x[1] <= y1 + tol_geom;
    }

    double unsigned_boundary_distance(const Vec& x) const {
        switch (kind_) {
            case Kind::interval01:
                return std::min(std::abs(x[0]), std::abs(1.0 - x[0]));
            case Kind::hypercube: {
                double d = std::numeric_limits<double>::infinity();
                for (int i = 0; i < dim_; ++i)
                    d = std::min({d, std::abs(x[i]), std::abs(1.0 - x[i])});
                return d;
            }
            case Kind::t_shape:
            case Kind::t_shape_figure:
                return polygon_distance(x.head(2));
            case Kind::disk:
                return std::abs(r1_ - x.head(2).norm());
            case Kind::ring: {
                const double r = x.head(2).norm();
                return std::min(std::abs(r - r1_), std::abs(r2_ - r));
            }
            case Kind::holed_rectangle: {
                const double dr = polygon_distance(x.head(2));
                const double dh = std::abs((x.head(2) - hole_center_.head(2)).norm() - hole_radius_);
                return std::min(dr, dh);
            }
            case Kind::user_implicit:
                return std::abs(sdf_(x));
        }
        return 0.0;
    }

    double polygon_distance(const Eigen::Vector2d& p) const {
        double best = std::numeric_limits<double>::infinity();
        const std::size_t n = poly_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d a = poly_[i], b = poly_[(i + 1) % n];
            best = std::min(best, (closest_on_segment(p, a, b) - p).norm());
        }
        return best;
    }

    static Eigen::Vector2d closest_on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                              const Eigen::Vector2d& b) {
        const Eigen::Vector2d ab = b - a;
        const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
        return a + t * ab;
    }

    BoundaryPoint project_polygon(const Vec& x) const {
        const Eigen::Vector2d p = x.head(2);
        const std::size_t n = poly_.size();
        struct Cand { double dist; Eigen::Vector2d loc, normal; };
        std::vector<Cand> cands;
        cands.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d a = poly_[i], b = poly_[(i + 1) % n];
            const Eigen::Vector2d q = closest_on_segment(p, a, b);
            Eigen::Vector2d dir = (b - a).normalized();
            // polygon vertices are listed counterclockwise, interior on the left
            Eigen::Vector2d inward(-dir.y(), dir.x());
            cands.push_back({(q - p).norm(), q, inward});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& u, const Cand& v) {
            if (std::abs(u.dist - v.dist) > 1e-13) return u.dist < v.dist;
            if (std::abs(u.loc.x() - v.loc.x()) > 1e-13) return u.loc.x() < v.loc.x();
            if (std::abs(u.loc.y() - v.loc.y()) > 1e-13) return u.loc.y() < v.loc.y();
            if (std::abs(u.normal.x() - v.normal.x()) > 1e-13) return u.normal.x() < v.normal.x();
            return u.normal.y() < v.normal.y();
        });
        BoundaryPoint out;
        out.location = cands.front().loc;
        out.inward_normal = cands.front().normal;
        return out;
    }

    BoundaryPoint project_box(const Vec& x, const Vec& lo, const Vec& hi) const {
        struct Cand { double dist; Vec loc, normal; };
        std::vector<Cand> cands;
        cands.reserve(2 * dim_);
        Vec clamped = x.cwiseMax(lo).cwiseMin(hi);
        for (int i = 0; i < dim_; ++i) {
            for (int side = 0; side < 2; ++side) {
                Vec loc = clamped;
                loc[i] = side == 0 ? lo[i] : hi[i];
                Vec nrm = Vec::Zero(dim_);
                nrm[i] = side == 0 ? 1.0 : -1.0;
                cands.push_back({(loc - x).norm(), loc, nrm});
            }
        }
        std::sort(cands.begin(), cands.end(), [this](const Cand& u, const Cand& v) {
            if (std::abs(u.dist - v.dist) > 1e-13) return u.dist < v.dist;
            for (int i = 0; i < dim_; ++i)
                if (std::abs(u.loc[i] - v.loc[i]) > 1e-13) return u.loc[i] < v.loc[i];
            for (int i = 0; i < dim_; ++i)
                if (std::abs(u.normal[i] - v.normal[i]) > 1e-13) return u.normal[i] < v.normal[i];
            return false;
        });
        BoundaryPoint out;
        out.location = cands.front().loc;
        out.inward_normal = cands.front().normal;
        return out;
    }

    BoundaryPoint project_implicit(const Vec& x) const {
        Vec p = x;
        const double fd = 1e-7;
        for (int it = 0; it < 30; ++it) {
            const double s = sdf_(p);
            if (std::abs(s) < 1e-12) break;
            Vec grad(dim_);
            for (int i = 0; i < dim_; ++i) {
                Vec ph = p, pl = p;
                ph[i] += fd;
                pl[i] -= fd;
                grad[i] = (sdf_(ph) - sdf_(pl)) / (2.0 * fd);
            }
            const double g2 = grad.squaredNorm();
            if (g2 < 1e-20)
                throw Error(ErrorCategory::numeric, "project_to_boundary: vanishing sdf gradient");
            p -= (s / g2) * grad;
        }
        Vec grad(dim_);
        for (int i = 0; i < dim_; ++i) {
            Vec ph = p, pl = p;
            ph[i] += fd;
            pl[i] -= fd;
            grad[i] = (sdf_(ph) - sdf_(pl)) / (2.0 * fd);
        }
        BoundaryPoint out;
        out.location = p;
        out.inward_normal = -grad.normalized();
        return out;
    }

    Kind kind_;
    int dim_;
    double r1_ = 0.0, r2_ = 0.0;
    std::vector<Eigen::Vector2d> poly_;
    Eigen::Vector2d hole_center_ = Eigen::Vector2d::Zero();
    double hole_radius_ = 0.0;
    std::function<double(const Vec&)> sdf_;
    Vec lo_, hi_;
};

}  // namespace bdry
