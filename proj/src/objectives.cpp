#include "geodescent/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace geodescent {

namespace {

const double kHalfPi = std::acos(-1.0) / 2.0;

double coth(double x) { return std::cosh(x) / std::sinh(x); }

// Largest Hessian eigenvalue of 1/2 d^2(.,q) within distance R of q:
// 1 on flat/positively curved spaces, R*coth(R) under non-positive curvature.
double sq_dist_lipschitz(CurvatureClass c, double R) {
    if (c != CurvatureClass::NonPositive) return 1.0;
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::invalid_argument(
            "squared distance: a finite domain radius is required under "
            "non-positive curvature");
    return R * coth(R);
}

void validate_anchor_set(const Manifold& m, const AnchorSet& a) {
    if (a.anchors.empty())
        throw std::invalid_argument("objective needs at least one anchor");
    if (a.anchors.size() != a.weights.size())
        throw std::invalid_argument("anchor and weight counts differ");
    for (const Point& q : a.anchors) m.validate_point(q);
    for (double w : a.weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("anchor weights must be positive");
}

void validate_domain(const Manifold& m, const std::optional<DomainBall>& d) {
    if (!d) return;
    m.validate_point(d->center);
    if (!(d->radius > 0.0))
        throw std::invalid_argument("domain radius must be positive");
}

} // namespace

std::string_view objective_kind_name(ObjectiveKind k) noexcept {
    switch (k) {
        case ObjectiveKind::SquaredDistance: return "squared_distance";
        case ObjectiveKind::Distance: return "distance";
        case ObjectiveKind::FermatWeber: return "fermat_weber";
        case ObjectiveKind::Karcher: return "karcher";
    }
    return "?";
}

double AnchorSet::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

Objective::Objective(ObjectiveKind kind, Manifold m, AnchorSet anchors,
                     std::optional<DomainBall> domain)
    : kind_(kind),
      manifold_(std::move(m)),
      anchors_(std::move(anchors)),
      domain_(std::move(domain)) {}

Objective Objective::squared_distance(const Manifold& m, Point q,
                                      double domain_radius) {
    m.validate_point(q);
    if (m.kind() == ManifoldKind::Sphere &&
        !(domain_radius > 0.0 && domain_radius < kHalfPi))
        throw std::invalid_argument(
            "squared distance on the sphere needs a domain radius in (0, pi/2)");
    if (!(domain_radius > 0.0))
        throw std::invalid_argument("domain radius must be positive");
    std::optional<DomainBall> ball;
    if (std::isfinite(domain_radius)) ball = DomainBall{q, domain_radius};
    Objective o(ObjectiveKind::SquaredDistance, m,
                AnchorSet{{q}, {1.0}}, std::move(ball));
    o.lipschitz_ = sq_dist_lipschitz(m.curvature(), domain_radius);
    if (std::isfinite(domain_radius))
        o.tau_ = domain_radius;  // ‖grad‖ = d(p, q) ≤ R on the ball
    o.optimum_ = KnownOptimum{std::move(q), 0.0, 0.0};
    return o;
}

Objective Objective::distance(const Manifold& m, Point q) {
    m.validate_point(q);
    Objective o(ObjectiveKind::Distance, m, AnchorSet{{q}, {1.0}}, {});
    o.tau_ = 1.0;
    o.optimum_ = KnownOptimum{std::move(q), 0.0, 0.0};
    return o;
}

Objective Objective::fermat_weber(const Manifold& m, AnchorSet anchors,
                                  std::optional<DomainBall> domain) {
    validate_anchor_set(m, anchors);
    validate_domain(m, domain);
    if (m.kind() == ManifoldKind::Sphere) {
        // the sum of distances is only geodesically convex on a small ball
        if (!domain || !(domain->radius < kHalfPi / 2.0))
            throw std::invalid_argument(
                "fermat-weber on the sphere needs a domain ball of radius < pi/4");
    }
    if (domain) {
        for (const Point& q : anchors.anchors)
            if (m.distance(domain->center, q) > domain->radius + 1e-12)
                throw std::invalid_argument(
                    "fermat-weber anchors must lie inside the domain ball");
    }
    Objective o(ObjectiveKind::FermatWeber, m, std::move(anchors),
                std::move(domain));
    o.tau_ = o.anchors_.total_weight();
    if (o.anchors_.anchors.size() == 1)
        o.optimum_ = KnownOptimum{o.anchors_.anchors[0], 0.0, 0.0};
    return o;
}

Objective Objective::karcher(const Manifold& m, AnchorSet anchors,
                             std::optional<DomainBall> domain) {
    validate_anchor_set(m, anchors);
    validate_domain(m, domain);
    if (m.curvature() != CurvatureClass::Zero && !domain)
        throw std::invalid_argument(
            "karcher objective needs a domain ball on curved manifolds");
    if (m.kind() == ManifoldKind::Sphere && !(domain->radius < kHalfPi))
        throw std::invalid_argument(
            "karcher on the sphere needs a domain radius < pi/2");
    double w = anchors.total_weight();
    double L = w;
    if (m.curvature() == CurvatureClass::NonPositive) {
        // any iterate sits within radius + d(center, anchor) of each anchor,
        // so that reach bounds the per-anchor Hessian
        double reach = 0.0;
        for (const Point& q : anchors.anchors)
            reach = std::max(reach,
                             domain->radius + m.distance(domain->center, q));
        L = w * std::max(1.0, sq_dist_lipschitz(m.curvature(), reach));
    }
    Objective o(ObjectiveKind::Karcher, m, std::move(anchors),
                std::move(domain));
    o.lipschitz_ = L;
    if (o.domain_) {
        // ‖grad‖ ≤ Σ wᵢ d(p, aᵢ), and each term is reach-bounded on the ball
        double tau = 0.0;
        for (size_t i = 0; i < o.anchors_.anchors.size(); ++i)
            tau += o.anchors_.weights[i] *
                   (o.domain_->radius +
                    m.distance(o.domain_->center, o.anchors_.anchors[i]));
        o.tau_ = tau;
    }
    // The mean is available in closed form for a few shapes.
    const auto& a = o.anchors_;
    if (a.anchors.size() == 1) {
        o.optimum_ = KnownOptimum{a.anchors[0], 0.0, 0.0};
    } else if (a.anchors.size() == 2) {
        // the weighted mean of two points divides their geodesic in
        // inverse proportion to the weights
        double d = m.distance(a.anchors[0], a.anchors[1]);
        double s = a.weights[1] * d / w;
        Point mean = d == 0.0
                         ? a.anchors[0]
                         : m.exp(a.anchors[0],
                                 m.scale(m.log(a.anchors[0], a.anchors[1]),
                                         s / d));
        double val = 0.5 * (a.weights[0] * s * s +
                            a.weights[1] * (d - s) * (d - s));
        o.optimum_ = KnownOptimum{std::move(mean), val, 0.0};
    } else if (m.curvature() == CurvatureClass::Zero) {
        std::vector<double> c(size_t(m.ambient_size()), 0.0);
        for (size_t i = 0; i < a.anchors.size(); ++i)
            for (size_t j = 0; j < c.size(); ++j)
                c[j] += a.weights[i] * a.anchors[i].coords[j] / w;
        Point mean = m.make_point(c);
        o.optimum_ = KnownOptimum{mean, o.value(mean), 0.0};
    }
    return o;
}

std::string Objective::id() const {
    std::string s(objective_kind_name(kind_));
    s += "@";
    s += kind_name(manifold_.kind());
    s += std::to_string(manifold_.descriptor().n);
    if (anchors_.anchors.size() > 1)
        s += "_" + std::to_string(anchors_.anchors.size()) + "anchors";
    return s;
}

double Objective::value(const Point& p) const {
    switch (kind_) {
        case ObjectiveKind::SquaredDistance: {
            double d = manifold_.distance(p, anchors_.anchors[0]);
            return 0.5 * d * d;
        }
        case ObjectiveKind::Distance:
            return manifold_.distance(p, anchors_.anchors[0]);
        case ObjectiveKind::FermatWeber: {
            double acc = 0.0;
            for (std::size_t i = 0; i < anchors_.anchors.size(); ++i)
                acc += anchors_.weights[i] *
                       manifold_.distance(p, anchors_.anchors[i]);
            return acc;
        }
        case ObjectiveKind::Karcher: {
            double acc = 0.0;
            for (std::size_t i = 0; i < anchors_.anchors.size(); ++i) {
                double d = manifold_.distance(p, anchors_.anchors[i]);
                acc += 0.5 * anchors_.weights[i] * d * d;
            }
            return acc;
        }
    }
    return 0.0;
}

TangentVector Objective::subgradient(const Point& p) const {
    switch (kind_) {
        case ObjectiveKind::SquaredDistance:
            return manifold_.scale(manifold_.log(p, anchors_.anchors[0]), -1.0);
        case ObjectiveKind::Distance: {
            const Point& q = anchors_.anchors[0];
            if (p.coords == q.coords) return manifold_.zero_tangent(p);
            double d = manifold_.distance(p, q);
            if (d == 0.0) return manifold_.zero_tangent(p);
            return manifold_.scale(manifold_.log(p, q), -1.0 / d);
        }
        case ObjectiveKind::FermatWeber: {
            TangentVector acc = manifold_.zero_tangent(p);
            for (std::size_t i = 0; i < anchors_.anchors.size(); ++i) {
                const Point& q = anchors_.anchors[i];
                if (p.coords == q.coords) continue;  // 0 is in that term's subdifferential
                double d = manifold_.distance(p, q);
                if (d == 0.0) continue;
                acc = manifold_.add(
                    acc, manifold_.scale(manifold_.log(p, q),
                                         -anchors_.weights[i] / d));
            }
            return acc;
        }
        case ObjectiveKind::Karcher: {
            TangentVector acc = manifold_.zero_tangent(p);
            for (std::size_t i = 0; i < anchors_.anchors.size(); ++i)
                acc = manifold_.add(
                    acc, manifold_.scale(manifold_.log(p, anchors_.anchors[i]),
                                         -anchors_.weights[i]));
            return acc;
        }
    }
    return manifold_.zero_tangent(p);
}

void Objective::set_known_optimum(KnownOptimum o) {
    manifold_.validate_point(o.point);
    if (!(o.residual >= 0.0))
        throw std::invalid_argument("optimum residual must be non-negative");
    optimum_ = std::move(o);
}

void Objective::override_grad_lipschitz(double L) {
    if (!(L > 0.0))
        throw std::invalid_argument("gradient Lipschitz constant must be positive");
    lipschitz_ = L;
}

bool Objective::has_exact_prox() const noexcept {
    return kind_ == ObjectiveKind::SquaredDistance &&
           manifold_.curvature() != CurvatureClass::NonNegative;
}

Point Objective::exact_prox(const Point& pk, double lambda) const {
    if (!has_exact_prox())
        throw std::invalid_argument("no closed-form prox for this objective");
    if (!(lambda > 0.0))
        throw std::invalid_argument("prox parameter must be positive");
    // minimize 1/2 d^2(p,q) + (lambda/2) d^2(p_k,p) along the geodesic
    // from p_k to q: quadratic in arclength with minimizer at 1/(1+lambda)
    TangentVector dir = manifold_.log(pk, anchors_.anchors[0]);
    return manifold_.exp(pk, manifold_.scale(dir, 1.0 / (1.0 + lambda)));
}

bool Objective::in_domain(const Point& p) const {
    if (!domain_) return true;
    return manifold_.distance(domain_->center, p) <= domain_->radius + 1e-12;
}

} // namespace geodescent
