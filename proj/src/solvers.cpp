#include "geodescent/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include "geodescent/errors.hpp"

namespace geodescent {

const char* method_name(Method m) noexcept {
    switch (m) {
        case Method::Gradient: return "gradient";
        case Method::Subgradient: return "subgradient";
        case Method::ProximalPoint: return "proximal_point";
    }
    return "?";
}

const char* termination_name(TerminationReason r) noexcept {
    switch (r) {
        case TerminationReason::MaxIters: return "max_iters";
        case TerminationReason::ToleranceMet: return "tolerance_met";
        case TerminationReason::DomainExit: return "domain_exit";
        case TerminationReason::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

namespace {

struct Run {
    const Objective& obj;
    const Manifold& m;
    Trace trace;
    std::optional<KnownOptimum> opt;

    Run(const Objective& o, const SolverConfig& cfg)
        : obj(o), m(o.manifold()) {
        trace.config = cfg;
        trace.objective_id = o.id();
        trace.manifold = m.descriptor();
        opt = o.known_optimum();
    }

    // Appends a record for p; returns false (NumericalFailure) on a
    // non-finite value.  The previous record's step_t is back-filled once
    // its successor actually lands.
    bool append(int k, const Point& p, double dir_norm, double prev_step) {
        double f = obj.value(p);
        if (!std::isfinite(f)) return false;
        IterateRecord rec;
        rec.k = k;
        rec.point = p;
        rec.f_value = f;
        rec.dir_norm = dir_norm;
        if (opt) {
            rec.dist_to_opt = m.distance(p, opt->point);
            rec.f_gap = f - opt->value;
        }
        if (!trace.records.empty()) trace.records.back().step_t = prev_step;
        trace.records.push_back(std::move(rec));
        return true;
    }
};

double exogenous_alpha(const Exogenous& e, int k) {
    switch (e.schedule) {
        case ScheduleKind::Constant: return e.alpha0;
        case ScheduleKind::InvSqrt: return e.alpha0 / std::sqrt(double(k + 1));
        case ScheduleKind::Harmonic: return e.alpha0 / double(k + 1);
    }
    return e.alpha0;
}

void require_start(const Objective& obj, const Point& p0) {
    obj.manifold().validate_point(p0);
    if (!obj.in_domain(p0))
        throw std::invalid_argument("initial point outside declared domain");
    if (!std::isfinite(obj.value(p0)))
        throw std::invalid_argument("objective non-finite at initial point");
}

void require_iters(const SolverConfig& cfg) {
    if (cfg.max_iters < 1)
        throw std::invalid_argument("max_iters must be positive");
}

} // namespace

Trace gradient_method(const Objective& obj, const Point& p0,
                      const SolverConfig& cfg) {
    require_iters(cfg);
    if (!obj.smooth())
        throw std::invalid_argument("gradient method requires a smooth objective");
    const auto* cil = std::get_if<ConstantInvL>(&cfg.rule);
    const auto* seq = std::get_if<FixedSequence>(&cfg.rule);
    if (!cil && !seq)
        throw std::invalid_argument("gradient method: unsupported stepsize rule");
    double inv_l = 0.0;
    if (cil) {
        auto L = obj.grad_lipschitz();
        if (!L || *L <= 0.0)
            throw std::invalid_argument(
                "constant 1/L stepsize requires a declared gradient Lipschitz constant");
        inv_l = 1.0 / *L;
    } else {
        if (int(seq->steps.size()) < cfg.max_iters)
            throw std::invalid_argument("fixed stepsize sequence shorter than max_iters");
        for (double t : seq->steps)
            if (!(t > 0.0) || !std::isfinite(t))
                throw std::invalid_argument("fixed stepsize sequence must be positive");
    }
    require_start(obj, p0);

    Run run(obj, cfg);
    Point p = p0;
    run.append(0, p, run.m.norm(obj.subgradient(p)), 0.0);
    for (int k = 0; k < cfg.max_iters; ++k) {
        double t = cil ? inv_l : seq->steps[size_t(k)];
        try {
            auto g = obj.subgradient(p);
            double gn = run.m.norm(g);
            if (!std::isfinite(gn)) {
                run.trace.reason = TerminationReason::NumericalFailure;
                return run.trace;
            }
            Point next = run.m.exp(p, run.m.scale(g, -t));
            if (!obj.in_domain(next)) {
                run.trace.reason = TerminationReason::DomainExit;
                return run.trace;
            }
            double next_norm = run.m.norm(obj.subgradient(next));
            if (!run.append(k + 1, next, next_norm, t)) {
                run.trace.reason = TerminationReason::NumericalFailure;
                return run.trace;
            }
            p = std::move(next);
        } catch (const numerical_error&) {
            run.trace.reason = TerminationReason::NumericalFailure;
            return run.trace;
        }
    }
    run.trace.reason = TerminationReason::MaxIters;
    return run.trace;
}

Trace subgradient_method(const Objective& obj, const Point& p0,
                         const SolverConfig& cfg) {
    require_iters(cfg);
    const auto* exo = std::get_if<Exogenous>(&cfg.rule);
    const auto* pol = std::get_if<Polyak>(&cfg.rule);
    if (!exo && !pol)
        throw std::invalid_argument("subgradient method: unsupported stepsize rule");
    if (exo && !(exo->alpha0 > 0.0))
        throw std::invalid_argument("exogenous schedule requires alpha0 > 0");
    double f_star = 0.0;
    if (pol) {
        if (pol->f_star)
            f_star = *pol->f_star;
        else if (obj.known_optimum())
            f_star = obj.known_optimum()->value;
        else
            throw std::invalid_argument("polyak requires f_star");
    }
    auto curv = obj.manifold().curvature();
    if (curv == CurvatureClass::NonPositive && !cfg.relaxed_curvature)
        throw std::invalid_argument(
            "subgradient method is certified only under non-negative curvature; "
            "set relaxed_curvature to run anyway");
    require_start(obj, p0);

    Run run(obj, cfg);
    Point p = p0;
    run.append(0, p, run.m.norm(obj.subgradient(p)), 0.0);
    for (int k = 0; k < cfg.max_iters; ++k) {
        try {
            auto s = obj.subgradient(p);
            double sn = run.m.norm(s);
            if (!std::isfinite(sn)) {
                run.trace.reason = TerminationReason::NumericalFailure;
                return run.trace;
            }
            if (sn == 0.0) {
                // 0 ∈ ∂f(p): p is optimal.
                run.trace.reason = TerminationReason::ToleranceMet;
                return run.trace;
            }
            double t;
            if (pol) {
                double gap = obj.value(p) - f_star;
                if (gap <= 0.0) {
                    // At (or numerically below) the target value already.
                    run.trace.reason = TerminationReason::ToleranceMet;
                    return run.trace;
                }
                t = gap / (sn * sn);
            } else {
                t = exogenous_alpha(*exo, k) / sn;
            }
            Point next = run.m.exp(p, run.m.scale(s, -t));
            if (!obj.in_domain(next)) {
                run.trace.reason = TerminationReason::DomainExit;
                return run.trace;
            }
            double next_norm = run.m.norm(obj.subgradient(next));
            if (!run.append(k + 1, next, next_norm, t)) {
                run.trace.reason = TerminationReason::NumericalFailure;
                return run.trace;
            }
            p = std::move(next);
        } catch (const numerical_error&) {
            run.trace.reason = TerminationReason::NumericalFailure;
            return run.trace;
        }
    }
    run.trace.reason = TerminationReason::MaxIters;
    return run.trace;
}

namespace {

struct InnerResult {
    Point point;
    double residual = 0.0;
};

// Minimizes F(q) = f(q) + (lambda/2) d²(base, q) by gradient steps with the
// constant step 1/(L_f + lambda); F is lambda-strongly convex, so this
// converges linearly from any start.
InnerResult inner_prox(const Objective& obj, const Manifold& m,
                       const Point& base, double lambda,
                       const InnerSolver& inner, double l_f) {
    Point q = base;
    double step = 1.0 / (l_f + lambda);
    double resid = 0.0;
    for (int j = 0;; ++j) {
        auto gf = obj.subgradient(q);
        auto pull = m.log(q, base);
        // grad of the proximal term (lambda/2) d²(base, ·) at q.
        auto g = m.subtract(gf, m.scale(pull, lambda));
        resid = m.norm(g);
        if (!std::isfinite(resid)) throw numerical_error("inner prox: non-finite gradient");
        if (resid <= inner.eps || j >= inner.max_inner) break;
        q = m.exp(q, m.scale(g, -step));
    }
    return {std::move(q), resid};
}

} // namespace

Trace proximal_point_method(const Objective& obj, const Point& p0,
                            const SolverConfig& cfg) {
    require_iters(cfg);
    auto curv = obj.manifold().curvature();
    if (curv == CurvatureClass::NonNegative)
        throw std::invalid_argument(
            "proximal point method requires a Hadamard manifold");
    const auto* cl = std::get_if<ConstantLambda>(&cfg.rule);
    if (!cl)
        throw std::invalid_argument("proximal point method: unsupported stepsize rule");
    if (!(cl->lambda > 0.0) || !std::isfinite(cl->lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    bool exact = obj.has_exact_prox();
    double l_f = 0.0;
    if (!exact) {
        if (!cfg.inner)
            throw std::invalid_argument(
                "objective has no closed-form prox; an inner solver is required");
        if (!(cfg.inner->eps > 0.0) || cfg.inner->max_inner < 1)
            throw std::invalid_argument("inner solver parameters must be positive");
        if (!obj.smooth() || !obj.grad_lipschitz())
            throw std::invalid_argument(
                "inner prox solver requires a smooth objective with declared L");
        l_f = *obj.grad_lipschitz();
    }
    require_start(obj, p0);

    Run run(obj, cfg);
    Point p = p0;
    run.append(0, p, 0.0, 0.0);
    for (int k = 0; k < cfg.max_iters; ++k) {
        try {
            Point next;
            double resid = 0.0;
            if (exact) {
                next = obj.exact_prox(p, cl->lambda);
            } else {
                auto r = inner_prox(obj, run.m, p, cl->lambda, *cfg.inner, l_f);
                next = std::move(r.point);
                resid = r.residual;
            }
            if (!obj.in_domain(next)) {
                run.trace.reason = TerminationReason::DomainExit;
                return run.trace;
            }
            if (next.coords == p.coords) {
                // Fixed point of the prox map: p minimizes f.
                run.trace.reason = TerminationReason::ToleranceMet;
                return run.trace;
            }
            if (!run.append(k + 1, next, resid, cl->lambda)) {
                run.trace.reason = TerminationReason::NumericalFailure;
                return run.trace;
            }
            p = std::move(next);
        } catch (const numerical_error&) {
            run.trace.reason = TerminationReason::NumericalFailure;
            return run.trace;
        }
    }
    run.trace.reason = TerminationReason::MaxIters;
    return run.trace;
}

Trace run_solver(const Objective& obj, const Point& p0,
                 const SolverConfig& cfg) {
    switch (cfg.method) {
        case Method::Gradient: return gradient_method(obj, p0, cfg);
        case Method::Subgradient: return subgradient_method(obj, p0, cfg);
        case Method::ProximalPoint: return proximal_point_method(obj, p0, cfg);
    }
    throw std::invalid_argument("unknown method");
}

} // namespace geodescent
