#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geodescent/geometry.hpp"

namespace geodescent {

enum class ObjectiveKind { SquaredDistance, Distance, FermatWeber, Karcher };

std::string_view objective_kind_name(ObjectiveKind k) noexcept;

struct AnchorSet {
    std::vector<Point> anchors;
    std::vector<double> weights;

    double total_weight() const;
};

/// Geodesic ball restricting where an objective's declared constants are
/// valid; solvers stop with DomainExit when an iterate leaves it.
struct DomainBall {
    Point center;
    double radius = 0.0;
};

struct KnownOptimum {
    Point point;
    double value = 0.0;
    /// Uncertainty of `value` when it comes from a numerical oracle;
    /// certificates fold this into their tolerance.
    double residual = 0.0;
};

/// A geodesically convex objective with value and (sub)gradient oracles.
/// Immutable after construction except for the optimum/Lipschitz setters,
/// which exist for oracle injection and audit control runs.
class Objective {
public:
    static Objective squared_distance(const Manifold& m, Point q,
                                      double domain_radius);
    static Objective distance(const Manifold& m, Point q);
    static Objective fermat_weber(const Manifold& m, AnchorSet anchors,
                                  std::optional<DomainBall> domain = {});
    static Objective karcher(const Manifold& m, AnchorSet anchors,
                             std::optional<DomainBall> domain = {});

    ObjectiveKind kind() const noexcept { return kind_; }
    const Manifold& manifold() const noexcept { return manifold_; }
    const AnchorSet& anchors() const noexcept { return anchors_; }
    const std::optional<DomainBall>& domain() const noexcept { return domain_; }
    bool smooth() const noexcept {
        return kind_ == ObjectiveKind::SquaredDistance ||
               kind_ == ObjectiveKind::Karcher;
    }
    std::string id() const;

    double value(const Point& p) const;
    /// The gradient for smooth kinds, a subgradient choice otherwise.
    TangentVector subgradient(const Point& p) const;

    std::optional<double> grad_lipschitz() const noexcept { return lipschitz_; }
    std::optional<double> func_lipschitz() const noexcept { return tau_; }
    const std::optional<KnownOptimum>& known_optimum() const noexcept {
        return optimum_;
    }
    void set_known_optimum(KnownOptimum o);
    /// Replaces the declared gradient-Lipschitz constant. Exists so audits
    /// can demonstrate that a mis-declared constant is caught.
    void override_grad_lipschitz(double L);

    bool has_exact_prox() const noexcept;
    /// argmin_p f(p) + (lambda/2) d^2(p_k, p), in closed form.
    Point exact_prox(const Point& pk, double lambda) const;

    /// True when no ball is declared or p lies inside it.
    bool in_domain(const Point& p) const;

private:
    Objective(ObjectiveKind kind, Manifold m, AnchorSet anchors,
              std::optional<DomainBall> domain);

    ObjectiveKind kind_;
    Manifold manifold_;
    AnchorSet anchors_;
    std::optional<DomainBall> domain_;
    std::optional<double> lipschitz_;
    std::optional<double> tau_;
    std::optional<KnownOptimum> optimum_;
};

} // namespace geodescent
