#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geodescent/errors.hpp"
#include "geodescent/geometry.hpp"
#include "geodescent/kernels.hpp"
#include "geodescent/linalg.hpp"

namespace geodescent {

namespace {

double nrm2(const std::vector<double>& v) {
    return kernels::nrm2(std::span<const double>(v.data(), v.size()));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return kernels::dot(a.data(), b.data(), a.size());
}

double mdot(const std::vector<double>& a, const std::vector<double>& b) {
    return kernels::minkowski_dot(a.data(), b.data(), a.size());
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// sin(t)/t and sinh(t)/t with series fallbacks near zero
double sinc(double t) {
    return t < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
}

double sinhc(double t) {
    return t < 1e-8 ? 1.0 + t * t / 6.0 : std::sinh(t) / t;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// --- sphere ---------------------------------------------------------------

// angle between unit vectors via the cancellation-free atan2 route
double sphere_angle(const std::vector<double>& p, const std::vector<double>& q,
                    std::vector<double>* residual_out) {
    double c = dot(p, q);
    if (std::abs(c) > 1.0 + kClampGuard)
        throw numerical_error("sphere distance: inner product far outside [-1, 1]");
    std::vector<double> u = q;
    kernels::axpy(-c, p.data(), u.data(), u.size());
    double s = nrm2(u);
    if (residual_out) *residual_out = std::move(u);
    return std::atan2(s, c);
}

// --- hyperboloid ----------------------------------------------------------

// q - <p,q>_M p is Minkowski-orthogonal to p; its Minkowski norm is sinh(d)
double hyper_angle(const std::vector<double>& p, const std::vector<double>& q,
                   std::vector<double>* residual_out) {
    double c = -mdot(p, q);
    if (c < 1.0 - kClampGuard)
        throw numerical_error("hyperboloid distance: inner product above -1");
    std::vector<double> u = q;
    kernels::axpy(-c, p.data(), u.data(), u.size());
    double s2 = mdot(u, u);
    if (s2 < 0.0) {
        if (s2 < -1e-10 * std::max(1.0, c * c))
            throw numerical_error("hyperboloid distance: negative tangent norm");
        s2 = 0.0;
    }
    if (residual_out) *residual_out = std::move(u);
    return std::asinh(std::sqrt(s2));
}

// --- spd ------------------------------------------------------------------

struct SpdRoots {
    std::vector<double> half;      // P^{1/2}
    std::vector<double> inv_half;  // P^{-1/2}
};

SpdRoots spd_roots(const std::vector<double>& P, int n, const char* where) {
    linalg::EigResult e = linalg::sym_eig(P, n);
    if (e.values.front() <= 0.0)
        throw std::invalid_argument(std::string(where) +
                                    ": matrix is not positive definite");
    SpdRoots r;
    r.half = linalg::eig_fn(e, n, [](double x) { return std::sqrt(x); });
    r.inv_half = linalg::eig_fn(e, n, [](double x) { return 1.0 / std::sqrt(x); });
    return r;
}

std::vector<double> spd_whiten(const SpdRoots& r, const std::vector<double>& A,
                               int n) {
    return linalg::symmetrized(linalg::congruence(r.inv_half, A, n), n);
}

} // namespace

double Manifold::inner(const TangentVector& u, const TangentVector& v) const {
    check_based(u.base, v, "inner");
    switch (kind()) {
        case ManifoldKind::Euclidean:
        case ManifoldKind::Sphere:
            return dot(u.comps, v.comps);
        case ManifoldKind::Hyperboloid:
            return mdot(u.comps, v.comps);
        case ManifoldKind::Spd: {
            int n = desc_.n;
            SpdRoots r = spd_roots(u.base.coords, n, "spd inner");
            std::vector<double> a = spd_whiten(r, u.comps, n);
            std::vector<double> b = spd_whiten(r, v.comps, n);
            return dot(a, b);
        }
    }
    return 0.0;
}

Point Manifold::project_point(Point p) const {
    check_point(p, "project_point");
    switch (kind()) {
        case ManifoldKind::Euclidean:
            break;
        case ManifoldKind::Sphere: {
            double nr = nrm2(p.coords);
            if (nr == 0.0)
                throw std::invalid_argument("project_point: zero vector has no direction");
            kernels::scal(1.0 / nr, p.coords.data(), p.coords.size());
            break;
        }
        case ManifoldKind::Hyperboloid: {
            // keep the spatial part, recompute the timelike coordinate
            std::size_t last = p.coords.size() - 1;
            double ss = kernels::dot(p.coords.data(), p.coords.data(), last);
            p.coords[last] = std::sqrt(1.0 + ss);
            break;
        }
        case ManifoldKind::Spd:
            linalg::symmetrize(p.coords.data(), desc_.n);
            break;
    }
    return p;
}

TangentVector Manifold::project_tangent(const Point& p,
                                        std::vector<double> comps) const {
    check_point(p, "project_tangent");
    if (static_cast<int>(comps.size()) != ambient_size())
        throw std::invalid_argument("project_tangent: component size mismatch");
    switch (kind()) {
        case ManifoldKind::Euclidean:
            break;
        case ManifoldKind::Sphere: {
            double c = dot(comps, p.coords);
            kernels::axpy(-c, p.coords.data(), comps.data(), comps.size());
            break;
        }
        case ManifoldKind::Hyperboloid: {
            double c = mdot(p.coords, comps);
            kernels::axpy(c, p.coords.data(), comps.data(), comps.size());
            break;
        }
        case ManifoldKind::Spd:
            linalg::symmetrize(comps.data(), desc_.n);
            break;
    }
    return TangentVector{p, std::move(comps)};
}

void Manifold::validate_point(const Point& p) const {
    check_point(p, "validate_point");
    if (!all_finite(p.coords))
        throw std::invalid_argument("validate_point: non-finite coordinates");
    switch (kind()) {
        case ManifoldKind::Euclidean:
            break;
        case ManifoldKind::Sphere: {
            double nr = nrm2(p.coords);
            if (std::abs(nr - 1.0) > kEmbedTol)
                throw std::invalid_argument("validate_point: sphere point is not unit length");
            break;
        }
        case ManifoldKind::Hyperboloid: {
            double m = mdot(p.coords, p.coords);
            if (std::abs(m + 1.0) > kEmbedTol * std::max(1.0, std::abs(m)))
                throw std::invalid_argument(
                    "validate_point: hyperboloid constraint violated");
            if (p.coords.back() <= 0.0)
                throw std::invalid_argument(
                    "validate_point: hyperboloid point must be on the upper sheet");
            break;
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            double scale = std::max(1.0, max_abs(p.coords));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (std::abs(p.coords[i * n + j] - p.coords[j * n + i]) >
                        kEmbedTol * scale)
                        throw std::invalid_argument(
                            "validate_point: spd point is not symmetric");
            if (linalg::sym_min_eig(p.coords, n) <= 0.0)
                throw std::invalid_argument(
                    "validate_point: spd point is not positive definite");
            break;
        }
    }
}

void Manifold::validate_tangent(const TangentVector& v) const {
    check_based(v.base, v, "validate_tangent");
    if (!all_finite(v.comps))
        throw std::invalid_argument("validate_tangent: non-finite components");
    double scale = std::max(1.0, nrm2(v.comps));
    switch (kind()) {
        case ManifoldKind::Euclidean:
            break;
        case ManifoldKind::Sphere: {
            if (std::abs(dot(v.comps, v.base.coords)) > kEmbedTol * scale)
                throw std::invalid_argument(
                    "validate_tangent: not orthogonal to the base point");
            break;
        }
        case ManifoldKind::Hyperboloid: {
            double c = std::abs(mdot(v.base.coords, v.comps));
            if (c > kEmbedTol * scale * std::max(1.0, max_abs(v.base.coords)))
                throw std::invalid_argument(
                    "validate_tangent: not Minkowski-orthogonal to the base point");
            break;
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            double s = std::max(1.0, max_abs(v.comps));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (std::abs(v.comps[i * n + j] - v.comps[j * n + i]) >
                        kEmbedTol * s)
                        throw std::invalid_argument(
                            "validate_tangent: spd tangent is not symmetric");
            break;
        }
    }
}

Point Manifold::exp(const Point& p, const TangentVector& v) const {
    check_based(p, v, "exp");
    bool zero = true;
    for (double c : v.comps)
        if (c != 0.0) {
            zero = false;
            break;
        }
    if (zero) return p;
    switch (kind()) {
        case ManifoldKind::Euclidean: {
            Point out = p;
            kernels::axpy(1.0, v.comps.data(), out.coords.data(),
                          out.coords.size());
            return out;
        }
        case ManifoldKind::Sphere: {
            double theta = nrm2(v.comps);
            Point out = p;
            kernels::combine(std::cos(theta), p.coords.data(), sinc(theta),
                             v.comps.data(), out.coords.data(),
                             out.coords.size());
            return project_point(std::move(out));
        }
        case ManifoldKind::Hyperboloid: {
            double t2 = mdot(v.comps, v.comps);
            if (t2 < 0.0) {
                double amb = dot(v.comps, v.comps);
                if (t2 < -1e-10 * std::max(1.0, amb))
                    throw numerical_error("exp: tangent has negative Minkowski norm");
                t2 = 0.0;
            }
            double theta = std::sqrt(t2);
            Point out = p;
            kernels::combine(std::cosh(theta), p.coords.data(), sinhc(theta),
                             v.comps.data(), out.coords.data(),
                             out.coords.size());
            return project_point(std::move(out));
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            SpdRoots r = spd_roots(p.coords, n, "exp");
            std::vector<double> inner_mat = spd_whiten(r, v.comps, n);
            std::vector<double> e = linalg::sym_exp(inner_mat, n);
            Point out = p;
            out.coords =
                linalg::symmetrized(linalg::congruence(r.half, e, n), n);
            return out;
        }
    }
    return p;
}

TangentVector Manifold::log(const Point& p, const Point& q) const {
    check_pair(p, q, "log");
    if (p.coords == q.coords) return zero_tangent(p);
    switch (kind()) {
        case ManifoldKind::Euclidean: {
            TangentVector out{p, q.coords};
            kernels::axpy(-1.0, p.coords.data(), out.comps.data(),
                          out.comps.size());
            return out;
        }
        case ManifoldKind::Sphere: {
            std::vector<double> u;
            double theta = sphere_angle(p.coords, q.coords, &u);
            if (theta > std::acos(-1.0) - kAntipodeMargin)
                throw std::domain_error(
                    "log: no unique shortest geodesic near the antipode");
            double s = nrm2(u);
            if (s == 0.0) return zero_tangent(p);
            kernels::scal(theta / s, u.data(), u.size());
            return TangentVector{p, std::move(u)};
        }
        case ManifoldKind::Hyperboloid: {
            std::vector<double> u;
            double theta = hyper_angle(p.coords, q.coords, &u);
            double s = std::sinh(theta);
            if (s == 0.0) return zero_tangent(p);
            kernels::scal(theta / s, u.data(), u.size());
            return TangentVector{p, std::move(u)};
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            SpdRoots r = spd_roots(p.coords, n, "log");
            std::vector<double> a = spd_whiten(r, q.coords, n);
            std::vector<double> l = linalg::sym_log(a, n);
            return TangentVector{
                p, linalg::symmetrized(linalg::congruence(r.half, l, n), n)};
        }
    }
    return zero_tangent(p);
}

double Manifold::distance(const Point& p, const Point& q) const {
    check_pair(p, q, "distance");
    if (p.coords == q.coords) return 0.0;
    switch (kind()) {
        case ManifoldKind::Euclidean: {
            std::vector<double> d = q.coords;
            kernels::axpy(-1.0, p.coords.data(), d.data(), d.size());
            return nrm2(d);
        }
        case ManifoldKind::Sphere:
            return sphere_angle(p.coords, q.coords, nullptr);
        case ManifoldKind::Hyperboloid:
            return hyper_angle(p.coords, q.coords, nullptr);
        case ManifoldKind::Spd: {
            int n = desc_.n;
            SpdRoots r = spd_roots(p.coords, n, "distance");
            std::vector<double> a = spd_whiten(r, q.coords, n);
            linalg::EigResult e = linalg::sym_eig(a, n);
            if (e.values.front() <= 0.0)
                throw std::invalid_argument(
                    "distance: matrix is not positive definite");
            double acc = 0.0;
            for (double lam : e.values) {
                double l = std::log(lam);
                acc += l * l;
            }
            return std::sqrt(acc);
        }
    }
    return 0.0;
}

TangentVector Manifold::parallel_transport(const Point& p, const Point& q,
                                           const TangentVector& v) const {
    check_pair(p, q, "parallel_transport");
    check_based(p, v, "parallel_transport");
    if (p.coords == q.coords) return v;
    switch (kind()) {
        case ManifoldKind::Euclidean:
            return TangentVector{q, v.comps};
        case ManifoldKind::Sphere:
        case ManifoldKind::Hyperboloid: {
            bool spherical = kind() == ManifoldKind::Sphere;
            TangentVector u = log(p, q);
            double theta = spherical ? nrm2(u.comps)
                                     : std::sqrt(std::max(0.0, mdot(u.comps, u.comps)));
            if (theta < 1e-12) return project_tangent(q, v.comps);
            TangentVector w = log(q, p);
            // unit direction at p, and its continuation at q
            double coef = (spherical ? dot(v.comps, u.comps)
                                     : mdot(v.comps, u.comps)) /
                          theta;
            std::vector<double> out = v.comps;
            kernels::axpy(-coef / theta, u.comps.data(), out.data(),
                          out.size());
            kernels::axpy(-coef / theta, w.comps.data(), out.data(),
                          out.size());
            return project_tangent(q, std::move(out));
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            SpdRoots r = spd_roots(p.coords, n, "parallel_transport");
            std::vector<double> a = spd_whiten(r, q.coords, n);
            std::vector<double> e =
                linalg::matmul(linalg::matmul(r.half, linalg::sym_sqrt(a, n), n),
                               r.inv_half, n);
            return TangentVector{
                q, linalg::symmetrized(linalg::congruence(e, v.comps, n), n)};
        }
    }
    return v;
}

Point Manifold::random_point(Sampler& s) const {
    switch (kind()) {
        case ManifoldKind::Euclidean: {
            std::vector<double> c(ambient_size());
            for (double& x : c) x = s.gaussian();
            return Point{desc_, std::move(c)};
        }
        case ManifoldKind::Sphere: {
            std::vector<double> c(ambient_size());
            double nr = 0.0;
            do {
                for (double& x : c) x = s.gaussian();
                nr = nrm2(c);
            } while (nr < 1e-6);
            kernels::scal(1.0 / nr, c.data(), c.size());
            return Point{desc_, std::move(c)};
        }
        case ManifoldKind::Hyperboloid: {
            std::vector<double> c(ambient_size());
            std::size_t last = c.size() - 1;
            double ss = 0.0;
            for (std::size_t i = 0; i < last; ++i) {
                c[i] = s.gaussian();
                ss += c[i] * c[i];
            }
            c[last] = std::sqrt(1.0 + ss);
            return Point{desc_, std::move(c)};
        }
        case ManifoldKind::Spd: {
            int n = desc_.n;
            std::vector<double> g(std::size_t(n) * n);
            for (double& x : g) x = 0.5 * s.gaussian();
            linalg::symmetrize(g.data(), n);
            return Point{desc_, linalg::sym_exp(g, n)};
        }
    }
    return Point{desc_, std::vector<double>(ambient_size(), 0.0)};
}

} // namespace geodescent
