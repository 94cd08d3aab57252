#include "geodescent/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "geodescent/kernels.hpp"

namespace geodescent {

std::string_view kind_name(ManifoldKind k) noexcept {
    switch (k) {
        case ManifoldKind::Euclidean: return "euclidean";
        case ManifoldKind::Sphere: return "sphere";
        case ManifoldKind::Hyperboloid: return "hyperboloid";
        case ManifoldKind::Spd: return "spd";
    }
    return "?";
}

std::string_view curvature_name(CurvatureClass c) noexcept {
    switch (c) {
        case CurvatureClass::NonNegative: return "nonnegative";
        case CurvatureClass::NonPositive: return "nonpositive";
        case CurvatureClass::Zero: return "zero";
    }
    return "?";
}

CurvatureClass ManifoldDescriptor::curvature() const noexcept {
    switch (kind) {
        case ManifoldKind::Euclidean: return CurvatureClass::Zero;
        case ManifoldKind::Sphere: return CurvatureClass::NonNegative;
        case ManifoldKind::Hyperboloid:
        case ManifoldKind::Spd: return CurvatureClass::NonPositive;
    }
    return CurvatureClass::Zero;
}

int ManifoldDescriptor::ambient_size() const noexcept {
    switch (kind) {
        case ManifoldKind::Euclidean: return n;
        case ManifoldKind::Sphere:
        case ManifoldKind::Hyperboloid: return n + 1;
        case ManifoldKind::Spd: return n * n;
    }
    return n;
}

int ManifoldDescriptor::intrinsic_dim() const noexcept {
    return kind == ManifoldKind::Spd ? n * (n + 1) / 2 : n;
}

Manifold Manifold::make(ManifoldKind kind, int dim) {
    return Manifold(ManifoldDescriptor{kind, dim});
}

Manifold::Manifold(ManifoldDescriptor d) : desc_(d) {
    if (d.n < 1)
        throw std::invalid_argument("manifold dimension must be >= 1");
    if (d.kind == ManifoldKind::Spd && d.n > 200)
        throw std::invalid_argument("spd matrix size capped at 200");
}

double Manifold::injectivity_radius() const noexcept {
    return kind() == ManifoldKind::Sphere
               ? std::acos(-1.0)
               : std::numeric_limits<double>::infinity();
}

void Manifold::check_point(const Point& p, const char* where) const {
    if (p.manifold != desc_)
        throw std::invalid_argument(std::string(where) +
                                    ": point belongs to a different manifold");
    if (static_cast<int>(p.coords.size()) != ambient_size())
        throw std::invalid_argument(std::string(where) +
                                    ": coordinate size mismatch");
}

void Manifold::check_pair(const Point& p, const Point& q,
                          const char* where) const {
    check_point(p, where);
    check_point(q, where);
}

void Manifold::check_based(const Point& p, const TangentVector& v,
                           const char* where) const {
    check_point(p, where);
    if (v.base.manifold != desc_ ||
        static_cast<int>(v.comps.size()) != ambient_size())
        throw std::invalid_argument(std::string(where) +
                                    ": tangent belongs to a different manifold");
    if (v.base.coords != p.coords)
        throw std::invalid_argument(std::string(where) +
                                    ": tangent is based at a different point");
}

Point Manifold::make_point(std::vector<double> coords) const {
    if (static_cast<int>(coords.size()) != ambient_size())
        throw std::invalid_argument("make_point: coordinate size mismatch");
    Point p{desc_, std::move(coords)};
    validate_point(p);
    return p;
}

TangentVector Manifold::make_tangent(const Point& base,
                                     std::vector<double> comps) const {
    check_point(base, "make_tangent");
    if (static_cast<int>(comps.size()) != ambient_size())
        throw std::invalid_argument("make_tangent: component size mismatch");
    TangentVector v{base, std::move(comps)};
    validate_tangent(v);
    return v;
}

TangentVector Manifold::zero_tangent(const Point& p) const {
    check_point(p, "zero_tangent");
    return TangentVector{p, std::vector<double>(p.coords.size(), 0.0)};
}

TangentVector Manifold::scale(const TangentVector& v, double a) const {
    TangentVector out = v;
    kernels::scal(a, out.comps.data(), out.comps.size());
    return out;
}

TangentVector Manifold::add(const TangentVector& u,
                            const TangentVector& w) const {
    check_based(u.base, w, "tangent add");
    TangentVector out = u;
    kernels::axpy(1.0, w.comps.data(), out.comps.data(), out.comps.size());
    return out;
}

TangentVector Manifold::subtract(const TangentVector& u,
                                 const TangentVector& w) const {
    check_based(u.base, w, "tangent subtract");
    TangentVector out = u;
    kernels::axpy(-1.0, w.comps.data(), out.comps.data(), out.comps.size());
    return out;
}

double Manifold::norm(const TangentVector& v) const {
    return std::sqrt(std::max(0.0, inner(v, v)));
}

TangentVector Manifold::random_tangent(const Point& p, Sampler& s,
                                       double max_norm) const {
    check_point(p, "random_tangent");
    if (!(max_norm > 0.0))
        throw std::invalid_argument("random_tangent: max_norm must be > 0");
    std::vector<double> comps(ambient_size());
    for (double& c : comps) c = s.gaussian();
    TangentVector v = project_tangent(p, std::move(comps));
    double nr = norm(v);
    if (nr == 0.0) return v;  // measure-zero fallback
    double target = max_norm * (1.0 - s.uniform());  // (0, max_norm]
    return scale(v, target / nr);
}

GeodesicSegment Manifold::segment(const Point& from, const Point& to) const {
    TangentVector dir = log(from, to);
    double len = norm(dir);
    return GeodesicSegment{from, std::move(dir), len};
}

Point Manifold::along(const GeodesicSegment& g, double t) const {
    return exp(g.start, scale(g.direction, t));
}

ComparisonAudit Manifold::check_comparison_nonneg(const Point& p,
                                                  const TangentVector& u,
                                                  const TangentVector& w,
                                                  double tol) const {
    if (curvature() == CurvatureClass::NonPositive)
        throw std::invalid_argument(
            "comparison bound requires non-negative curvature");
    double lhs = distance(exp(p, u), exp(p, w));
    double rhs = norm(subtract(u, w));
    return ComparisonAudit{lhs, rhs, lhs <= rhs + tol};
}

ComparisonAudit Manifold::check_comparison_nonpos(const Point& p,
                                                  const TangentVector& u,
                                                  const TangentVector& w,
                                                  double tol) const {
    if (curvature() == CurvatureClass::NonNegative)
        throw std::invalid_argument(
            "comparison bound requires non-positive curvature");
    double lhs = distance(exp(p, u), exp(p, w));
    double rhs = norm(subtract(u, w));
    return ComparisonAudit{lhs, rhs, lhs >= rhs - tol};
}

} // namespace geodescent
