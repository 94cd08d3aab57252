#include "geodescent/audits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "geodescent/certificates.hpp"
#include "geodescent/solvers.hpp"

namespace geodescent {

namespace {

// Tangent norm cap keeping sampled pairs well inside the log's reach.
double reach_cap(const Manifold& m) {
    switch (m.kind()) {
        case ManifoldKind::Sphere: return 1.4;
        case ManifoldKind::Spd: return 2.0;
        default: return 2.5;
    }
}

struct SuiteRunner {
    long seed;
    std::vector<AuditReport>& out;

    // body(check) draws one sample and reports (margin, ok) through check.
    void run(const std::string& id, int samples,
             const std::function<void(Sampler&, const std::function<void(double)>&)>&
                 body) {
        AuditReport rep;
        rep.suite_id = id;
        rep.seed = seed;
        rep.worst_margin = std::numeric_limits<double>::infinity();
        Sampler s(std::uint64_t(seed) ^ std::hash<std::string>{}(id));
        auto check = [&](double margin) {
            rep.samples += 1;
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (margin < 0.0) rep.violations += 1;
        };
        for (int i = 0; i < samples; ++i) body(s, check);
        if (rep.samples == 0) rep.worst_margin = 0.0;
        out.push_back(std::move(rep));
    }
};

// A point usable as an anchor for sampling: the domain ball's center when
// the objective declares one, otherwise a seeded draw.
Point sample_center(const Manifold& m, const Objective& o, long seed) {
    if (o.domain()) return o.domain()->center;
    Sampler s(std::uint64_t(seed) * 0x9e3779b97f4a7c15ull + 1);
    return m.random_point(s);
}

// Draw a point within reach of the domain (or the cap) plus a tangent that
// keeps exp(p, v) inside it; used by the objective-inequality suites.
struct DomainDraw {
    Point p;
    TangentVector v;
};

DomainDraw draw_in_domain(const Manifold& m, const Objective& o,
                          const Point& center, Sampler& s) {
    double radius = o.domain() ? o.domain()->radius : reach_cap(m);
    double rp = 0.95 * radius * s.uniform();
    Point p = m.exp(center, m.random_tangent(center, s, std::max(rp, 1e-9)));
    double room = std::max((0.95 * radius - rp) * 0.9, 1e-9);
    return {p, m.random_tangent(p, s, room)};
}

} // namespace

std::vector<AuditReport> run_audit_suites(const Manifold& m,
                                          const Objective& o, long seed,
                                          int samples) {
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    if (!(m.descriptor() == o.manifold().descriptor()))
        throw std::invalid_argument("audit manifold differs from the objective's");

    std::vector<AuditReport> reports;
    SuiteRunner runner{seed, reports};
    const double cap = reach_cap(m);
    const Point center = sample_center(m, o, seed);

    runner.run("geom/exp_log_roundtrip", samples, [&](Sampler& s, auto check) {
        auto p = m.random_point(s);
        auto v = m.random_tangent(p, s, cap);
        auto w = m.log(p, m.exp(p, v));
        check(1e-8 - m.norm(m.subtract(w, v)));
    });

    runner.run("geom/transport_isometry", samples, [&](Sampler& s, auto check) {
        auto p = m.random_point(s);
        auto q = m.exp(p, m.random_tangent(p, s, cap));
        auto u = m.random_tangent(p, s, 2.0);
        auto v = m.random_tangent(p, s, 2.0);
        auto tu = m.parallel_transport(p, q, u);
        auto tv = m.parallel_transport(p, q, v);
        double before = m.inner(u, v), after = m.inner(tu, tv);
        double norm_err = std::abs(m.norm(tu) - m.norm(u));
        double pair_err = std::abs(after - before) / (1.0 + std::abs(before));
        check(1e-10 - std::max(norm_err, pair_err));
    });

    runner.run("geom/triangle_inequality", samples, [&](Sampler& s, auto check) {
        auto p = m.random_point(s);
        auto q = m.exp(p, m.random_tangent(p, s, cap));
        auto r = m.exp(p, m.random_tangent(p, s, cap));
        check(m.distance(p, q) + m.distance(q, r) - m.distance(p, r) + 1e-9);
    });

    runner.run("geom/distance_log_agreement", samples, [&](Sampler& s, auto check) {
        auto p = m.random_point(s);
        auto q = m.exp(p, m.random_tangent(p, s, cap));
        check(1e-9 - std::abs(m.distance(p, q) - m.norm(m.log(p, q))));
    });

    if (m.curvature() != CurvatureClass::NonPositive) {
        runner.run("geom/comparison_nonneg", samples, [&](Sampler& s, auto check) {
            auto p = m.random_point(s);
            auto u = m.random_tangent(p, s, cap / 2.0);
            auto w = m.random_tangent(p, s, cap / 2.0);
            auto a = m.check_comparison_nonneg(p, u, w);
            check(a.rhs - a.lhs + 1e-9);
        });
    }
    if (m.curvature() != CurvatureClass::NonNegative) {
        runner.run("geom/comparison_nonpos", samples, [&](Sampler& s, auto check) {
            auto p = m.random_point(s);
            auto u = m.random_tangent(p, s, cap / 2.0);
            auto w = m.random_tangent(p, s, cap / 2.0);
            auto a = m.check_comparison_nonpos(p, u, w);
            check(a.lhs - a.rhs + 1e-9);
        });
    }

    // ---- objective inequalities -------------------------------------------

    runner.run(o.smooth() ? "obj/first_order_convexity" : "obj/subgrad_inequality",
               samples, [&](Sampler& s, auto check) {
                   auto [p, v] = draw_in_domain(m, o, center, s);
                   auto g = o.subgradient(p);
                   check(o.value(m.exp(p, v)) - o.value(p) - m.inner(g, v) + 1e-9);
               });

    runner.run("obj/geodesic_convexity", samples, [&](Sampler& s, auto check) {
        auto a = draw_in_domain(m, o, center, s);
        auto b = draw_in_domain(m, o, center, s);
        double t = s.uniform();
        auto g = m.segment(a.p, b.p);
        check((1.0 - t) * o.value(a.p) + t * o.value(b.p) -
              o.value(m.along(g, t)) + 1e-9);
    });

    if (o.smooth() && o.grad_lipschitz()) {
        double L = *o.grad_lipschitz();
        runner.run("obj/descent_lemma", samples, [&](Sampler& s, auto check) {
            auto [p, v] = draw_in_domain(m, o, center, s);
            auto g = o.subgradient(p);
            check(o.value(p) + m.inner(g, v) + 0.5 * L * m.inner(v, v) -
                  o.value(m.exp(p, v)) + 1e-9);
        });

        runner.run("obj/grad_fd_slope", samples, [&](Sampler& s, auto check) {
            auto [p, vraw] = draw_in_domain(m, o, center, s);
            auto v = m.scale(vraw, 1.0 / m.norm(vraw));
            auto g = o.subgradient(p);
            double f0 = o.value(p), lin = m.inner(g, v);
            auto err = [&](double h) {
                return std::abs((o.value(m.exp(p, m.scale(v, h))) - f0) / h - lin);
            };
            double e3 = err(1e-3);
            if (e3 < 1e-9) {
                check(0.0);  // below the rounding floor: trivially first order
                return;
            }
            double slope = (std::log(e3) - std::log(err(1e-5))) /
                           (std::log(1e-3) - std::log(1e-5));
            check(0.2 - std::abs(slope - 1.0));
        });
    }

    if (o.func_lipschitz()) {
        double tau = *o.func_lipschitz();
        runner.run("obj/func_lipschitz", samples, [&](Sampler& s, auto check) {
            auto a = draw_in_domain(m, o, center, s);
            auto b = draw_in_domain(m, o, center, s);
            check(tau * m.distance(a.p, b.p) -
                  std::abs(o.value(a.p) - o.value(b.p)) + 1e-9);
        });
    }

    if (o.known_optimum()) {
        double floor = o.known_optimum()->value - o.known_optimum()->residual;
        runner.run("obj/optimum_lower_bound", samples, [&](Sampler& s, auto check) {
            auto a = draw_in_domain(m, o, center, s);
            check(o.value(a.p) - floor + 1e-9);
        });
    }

    if (o.has_exact_prox()) {
        runner.run("obj/prox_optimality", samples, [&](Sampler& s, auto check) {
            auto a = draw_in_domain(m, o, center, s);
            double lambda = 0.25 + 2.0 * s.uniform();
            auto pr = o.exact_prox(a.p, lambda);
            auto moved = [&](const Point& r) {
                double d = m.distance(a.p, r);
                return o.value(r) + 0.5 * lambda * d * d;
            };
            auto cand = m.exp(pr, m.random_tangent(pr, s, 0.5));
            check(moved(cand) - moved(pr) + 1e-9);
        });
    }

    // ---- per-step solver invariants, driven by short internal runs --------

    int iters = std::clamp(samples / 100, 8, 48);
    auto start_near = [&](Sampler& s) {
        double radius = o.domain() ? 0.8 * o.domain()->radius : reach_cap(m);
        return m.exp(center, m.random_tangent(center, s, radius));
    };

    if (o.smooth() && o.grad_lipschitz()) {
        double L = *o.grad_lipschitz();
        Sampler s0(std::uint64_t(seed) + 17);
        SolverConfig gc;
        gc.method = Method::Gradient;
        gc.max_iters = iters;
        gc.rule = ConstantInvL{};
        auto tr = gradient_method(o, start_near(s0), gc);

        runner.run("solver/grad_step_decrease", int(tr.records.size()) - 1,
                   [&, i = size_t(0)](Sampler&, auto check) mutable {
                       double g = tr.records[i].dir_norm;
                       check(tr.records[i].f_value - tr.records[i + 1].f_value -
                             g * g / (2.0 * L) + 1e-9);
                       ++i;
                   });

        runner.run("solver/grad_variational_step", int(tr.records.size()) - 1,
                   [&, i = size_t(0)](Sampler& s, auto check) mutable {
                       const auto& p = tr.records[i].point;
                       double t = tr.records[i].step_t;
                       auto g = o.subgradient(p);
                       auto vk = m.scale(g, -t);
                       double vn = m.norm(vk);
                       double worst = 1.0;
                       if (vn > 0.0) {
                           auto model = [&](const TangentVector& v) {
                               return m.inner(g, v) + m.inner(v, v) / (2.0 * t);
                           };
                           double at_vk = model(vk);
                           for (int j = 0; j < 100; ++j) {
                               auto v = m.random_tangent(p, s, 2.0 * vn);
                               worst = std::min(worst, model(v) - at_vk + 1e-12);
                           }
                       }
                       check(worst);
                       ++i;
                   });
    }

    bool subgrad_ok = m.curvature() != CurvatureClass::NonPositive;
    if (subgrad_ok && o.func_lipschitz() && o.known_optimum()) {
        const auto& opt = *o.known_optimum();
        Sampler s0(std::uint64_t(seed) + 29);
        SolverConfig sc;
        sc.method = Method::Subgradient;
        sc.max_iters = iters;
        sc.rule = Exogenous{ScheduleKind::InvSqrt, 0.1};
        auto tr = subgradient_method(o, start_near(s0), sc);

        runner.run("solver/subgrad_fundamental_ineq", int(tr.records.size()) - 1,
                   [&, i = size_t(0)](Sampler&, auto check) mutable {
                       double dk = m.distance(tr.records[i].point, opt.point);
                       double dn = m.distance(tr.records[i + 1].point, opt.point);
                       double t = tr.records[i].step_t;
                       double sn = tr.records[i].dir_norm;
                       check(dk * dk + t * t * sn * sn -
                             2.0 * t * (tr.records[i].f_value - opt.value) -
                             dn * dn + 1e-9 + 2.0 * t * opt.residual);
                       ++i;
                   });

        SolverConfig pc = sc;
        pc.rule = Polyak{};
        auto pt = subgradient_method(o, start_near(s0), pc);
        runner.run("solver/polyak_dist_monotone", int(pt.records.size()) - 1,
                   [&, i = size_t(0)](Sampler&, auto check) mutable {
                       double dk = m.distance(pt.records[i].point, opt.point);
                       double dn = m.distance(pt.records[i + 1].point, opt.point);
                       // oracle residue can push the step slightly long
                       check(dk - dn + 1e-9 +
                             std::sqrt(opt.residual) + opt.residual);
                       ++i;
                   });
    }

    bool prox_ok = m.curvature() != CurvatureClass::NonNegative &&
                   (o.has_exact_prox() || (o.smooth() && o.grad_lipschitz()));
    if (prox_ok) {
        Sampler s0(std::uint64_t(seed) + 43);
        SolverConfig pc;
        pc.method = Method::ProximalPoint;
        pc.max_iters = iters;
        double lambda = 0.8;
        pc.rule = ConstantLambda{lambda};
        if (!o.has_exact_prox()) pc.inner = InnerSolver{1e-10, 20000};
        auto tr = proximal_point_method(o, start_near(s0), pc);
        double eps = o.has_exact_prox() ? 0.0 : pc.inner->eps;

        runner.run("solver/prox_characterization", int(tr.records.size()) - 1,
                   [&, i = size_t(0)](Sampler&, auto check) mutable {
                       double d = m.distance(tr.records[i].point,
                                             tr.records[i + 1].point);
                       check(tr.records[i].f_value - tr.records[i + 1].f_value -
                             lambda * d * d + 1e-9 + eps * d);
                       ++i;
                   });

        if (o.smooth() && o.has_exact_prox()) {
            runner.run("solver/prox_first_order_residual",
                       int(tr.records.size()) - 1,
                       [&, i = size_t(0)](Sampler&, auto check) mutable {
                           const auto& pk = tr.records[i].point;
                           const auto& pn = tr.records[i + 1].point;
                           auto g = o.subgradient(pn);
                           auto pull = m.log(pn, pk);
                           check(1e-8 -
                                 m.norm(m.subtract(g, m.scale(pull, lambda))));
                           ++i;
                       });
        }
    }

    return reports;
}

} // namespace geodescent
