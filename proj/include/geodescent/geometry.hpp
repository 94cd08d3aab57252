#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace geodescent {

enum class ManifoldKind { Euclidean, Sphere, Hyperboloid, Spd };
enum class CurvatureClass { NonNegative, NonPositive, Zero };

std::string_view kind_name(ManifoldKind k) noexcept;
std::string_view curvature_name(CurvatureClass c) noexcept;

/// Identifies a manifold and its size. `n` is the defining dimension:
/// R^n, S^n, H^n, or the matrix size of SPD(n).
struct ManifoldDescriptor {
    ManifoldKind kind = ManifoldKind::Euclidean;
    int n = 1;

    CurvatureClass curvature() const noexcept;
    int ambient_size() const noexcept;  // length of the coordinate vector
    int intrinsic_dim() const noexcept;
    bool operator==(const ManifoldDescriptor&) const = default;
};

/// A location on a manifold in ambient coordinates. Sphere and hyperboloid
/// points live in R^{n+1}; SPD points are row-major n-by-n matrices.
struct Point {
    ManifoldDescriptor manifold;
    std::vector<double> coords;
};

/// A tangent vector at `base`, stored in the same ambient representation.
struct TangentVector {
    Point base;
    std::vector<double> comps;
};

/// Geodesic t -> exp_start(t * direction), t in [0, 1].
struct GeodesicSegment {
    Point start;
    TangentVector direction;
    double length = 0.0;
};

/// One sampled comparison-inequality check (Toponogov-type bound).
struct ComparisonAudit {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Seedable Gaussian/uniform source for reproducible sampling.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double gaussian() { return normal_(rng_); }
    double uniform() { return uniform_(rng_); }  // [0, 1)
    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Embedding tolerance for point/tangent invariants.
inline constexpr double kEmbedTol = 1e-10;
/// acos/acosh arguments may be clamped by at most this much.
inline constexpr double kClampGuard = 1e-7;
/// Sphere log/transport reject pairs closer than this to the antipode.
inline constexpr double kAntipodeMargin = 1e-6;

/// The four concrete geometries behind one value-type interface. All
/// operations are pure; a Manifold holds only its descriptor.
class Manifold {
public:
    static Manifold make(ManifoldKind kind, int dim);
    explicit Manifold(ManifoldDescriptor d);

    const ManifoldDescriptor& descriptor() const noexcept { return desc_; }
    ManifoldKind kind() const noexcept { return desc_.kind; }
    CurvatureClass curvature() const noexcept { return desc_.curvature(); }
    int ambient_size() const noexcept { return desc_.ambient_size(); }
    double injectivity_radius() const noexcept;

    /// Validating constructors for the value types.
    Point make_point(std::vector<double> coords) const;
    TangentVector make_tangent(const Point& base,
                               std::vector<double> comps) const;

    Point exp(const Point& p, const TangentVector& v) const;
    TangentVector log(const Point& p, const Point& q) const;
    double distance(const Point& p, const Point& q) const;
    TangentVector parallel_transport(const Point& p, const Point& q,
                                     const TangentVector& v) const;

    /// Riemannian metric at the common base point.
    double inner(const TangentVector& u, const TangentVector& v) const;
    double norm(const TangentVector& v) const;

    TangentVector zero_tangent(const Point& p) const;
    TangentVector scale(const TangentVector& v, double a) const;
    TangentVector add(const TangentVector& u, const TangentVector& w) const;
    TangentVector subtract(const TangentVector& u,
                           const TangentVector& w) const;

    /// Pull ambient data back onto the manifold / tangent space.
    Point project_point(Point p) const;
    TangentVector project_tangent(const Point& p,
                                  std::vector<double> comps) const;

    /// Embedding invariant checks; throw on violation beyond kEmbedTol.
    void validate_point(const Point& p) const;
    void validate_tangent(const TangentVector& v) const;

    Point random_point(Sampler& s) const;
    /// Random tangent at p with norm uniform in (0, max_norm].
    TangentVector random_tangent(const Point& p, Sampler& s,
                                 double max_norm) const;

    GeodesicSegment segment(const Point& from, const Point& to) const;
    Point along(const GeodesicSegment& g, double t) const;

    /// d(exp_p u, exp_p w) <= |u - w|   (non-negative curvature)
    ComparisonAudit check_comparison_nonneg(const Point& p,
                                            const TangentVector& u,
                                            const TangentVector& w,
                                            double tol = 1e-9) const;
    /// d(exp_p u, exp_p w) >= |u - w|   (non-positive curvature)
    ComparisonAudit check_comparison_nonpos(const Point& p,
                                            const TangentVector& u,
                                            const TangentVector& w,
                                            double tol = 1e-9) const;

private:
    ManifoldDescriptor desc_;

    void check_point(const Point& p, const char* where) const;
    void check_pair(const Point& p, const Point& q, const char* where) const;
    void check_based(const Point& p, const TangentVector& v,
                     const char* where) const;
};

} // namespace geodescent
