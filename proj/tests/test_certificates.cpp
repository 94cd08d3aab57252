#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "geodescent/certificates.hpp"
#include "geodescent/geometry.hpp"
#include "geodescent/objectives.hpp"
#include "geodescent/solvers.hpp"

using namespace geodescent;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Manifold euclid(int n) { return Manifold::make(ManifoldKind::Euclidean, n); }
Manifold sphere(int n) { return Manifold::make(ManifoldKind::Sphere, n); }
Manifold hyper(int n) { return Manifold::make(ManifoldKind::Hyperboloid, n); }
Manifold spd(int n) { return Manifold::make(ManifoldKind::Spd, n); }

SolverConfig grad_cfg(int iters) {
    SolverConfig c;
    c.method = Method::Gradient;
    c.max_iters = iters;
    c.rule = ConstantInvL{};
    return c;
}

// The flat quadratic f = ½‖p‖² as a one-anchor mean problem.
Objective flat_quadratic(const Manifold& m) {
    return Objective::karcher(
        m, AnchorSet{{m.make_point(std::vector<double>(
                         size_t(m.ambient_size()), 0.0))},
                     {1.0}});
}

} // namespace

TEST_CASE("gradient norm bound evaluated at the initial point alone") {
    auto m = euclid(2);
    auto o = flat_quadratic(m);
    // a 1-iteration run truncated to its first record gives N = 0
    auto tr = trace_prefix(gradient_method(o, m.make_point({3, 4}), grad_cfg(1)), 0);
    auto c = certify_grad_norm_sqrt(tr, o);
    CHECK(c.N == 0);
    CHECK(c.lhs == doctest::Approx(5.0).epsilon(1e-14));   // ‖grad‖ = ‖p0‖
    CHECK(c.rhs == doctest::Approx(5.0).epsilon(1e-14));   // √(2·1·12.5/1)
    CHECK(c.holds);
    CHECK(c.inputs_echo.at("L") == 1.0);
    CHECK(c.inputs_echo.at("f0_gap") == doctest::Approx(12.5));
}

TEST_CASE("starting at the optimum certifies with equality") {
    auto m = sphere(3);
    Sampler s(90);
    auto q = m.random_point(s);
    auto o = Objective::squared_distance(m, q, 1.2);
    auto tr = gradient_method(o, q, grad_cfg(3));
    auto c = certify_grad_norm_sqrt(tr, o);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
    CHECK(c.holds);
    auto lin = certify_grad_norm_linear(tr, o);
    CHECK(lin.lhs == 0.0);
    CHECK(lin.rhs == 0.0);
    CHECK(lin.holds);
}

TEST_CASE("value-rate bound after one exact minimizing step") {
    auto m = euclid(2);
    auto o = flat_quadratic(m);
    auto tr = gradient_method(o, m.make_point({3, 4}), grad_cfg(1));
    auto c = certify_grad_value_rate(tr, o);
    CHECK(c.N == 1);
    CHECK(c.lhs == doctest::Approx(0.0));
    CHECK(c.rhs == doctest::Approx(12.5));  // L·d0²/2 = 25/2
    CHECK(c.holds);
}

TEST_CASE("corollary bound on a ten-step quadratic run") {
    auto m = euclid(2);
    auto o = flat_quadratic(m);
    auto tr = gradient_method(o, m.make_point({3, 4}), grad_cfg(10));
    auto c = certify_grad_norm_linear(tr, o);
    CHECK(c.N == 10);
    CHECK(c.lhs == doctest::Approx(0.0));
    CHECK(c.rhs == doctest::Approx(std::sqrt(8.0) * 5.0 / 10.0));
    // the proof-level constant is tighter than the stated one
    CHECK(c.inputs_echo.at("diagnostic_rhs") ==
          doctest::Approx(2.0 * 5.0 / std::sqrt(10.0 * 5.0)));
    CHECK(c.inputs_echo.at("diagnostic_rhs") < c.rhs);
    CHECK(c.holds);
}

TEST_CASE("long sphere runs satisfy all three smooth bounds") {
    Sampler s(91);
    auto m = sphere(2);
    auto q = m.random_point(s);
    auto o = Objective::squared_distance(m, q, 1.4);
    auto u = m.random_tangent(q, s, 1.0);
    auto p0 = m.exp(q, m.scale(u, 1.0 / m.norm(u)));  // d(p0,q) = 1
    auto tr = gradient_method(o, p0, grad_cfg(200));
    REQUIRE(tr.records.size() == 201);

    auto c1 = certify_grad_norm_sqrt(tr, o);
    CHECK(c1.holds);
    CHECK(c1.margin > 0.0);
    auto c2 = certify_grad_value_rate(tr, o);
    CHECK(c2.holds);
    CHECK(c2.rhs == doctest::Approx(o.grad_lipschitz().value() / 400.0));
    auto c3 = certify_grad_norm_linear(tr, o);
    CHECK(c3.holds);
}

TEST_CASE("value-rate and corollary refuse negative curvature and N=0") {
    Sampler s(92);
    auto m = hyper(2);
    auto q = m.random_point(s);
    auto o = Objective::squared_distance(m, q, 2.0);
    auto p0 = m.exp(q, m.random_tangent(q, s, 1.0));
    auto tr = gradient_method(o, p0, grad_cfg(5));
    CHECK_NOTHROW(certify_grad_norm_sqrt(tr, o));  // curvature-free statement
    CHECK_THROWS_AS(certify_grad_value_rate(tr, o), std::invalid_argument);
    CHECK_THROWS_AS(certify_grad_norm_linear(tr, o), std::invalid_argument);

    auto m2 = euclid(2);
    auto o2 = flat_quadratic(m2);
    auto one = trace_prefix(
        gradient_method(o2, m2.make_point({1, 0}), grad_cfg(1)), 0);
    CHECK_THROWS_AS(certify_grad_value_rate(one, o2), std::invalid_argument);
    CHECK_THROWS_AS(certify_grad_norm_linear(one, o2), std::invalid_argument);

    // wrong rule family
    SolverConfig fc;
    fc.method = Method::Gradient;
    fc.max_iters = 2;
    fc.rule = FixedSequence{{0.5, 0.5}};
    auto ft = gradient_method(o2, m2.make_point({1, 1}), fc);
    CHECK_THROWS_AS(certify_grad_norm_sqrt(ft, o2), std::invalid_argument);
}

TEST_CASE("exogenous bound matches a hand-computed rhs") {
    auto m = euclid(2);
    AnchorSet a{{m.make_point({0, 0}), m.make_point({2, 0}),
                 m.make_point({1, 3})},
                {1, 1, 1}};
    auto o = Objective::fermat_weber(m, a);
    o.set_known_optimum(
        {m.make_point({1.0, 0.5773502691896258}), 4.732050807568877, 1e-11});
    SolverConfig c;
    c.method = Method::Subgradient;
    c.max_iters = 400;
    c.rule = Exogenous{ScheduleKind::InvSqrt, 0.5};
    auto p0 = m.make_point({-1, 2});
    auto tr = subgradient_method(o, p0, c);
    REQUIRE(int(tr.records.size()) == 401);
    auto cert = certify_subgrad_exogenous(tr, o);

    double sum_a = 0.0, sum_a2 = 0.0;
    for (int k = 0; k <= 400; ++k) {
        sum_a += 0.5 / std::sqrt(double(k + 1));
        sum_a2 += 0.25 / double(k + 1);
    }
    double d0 = std::hypot(-1.0 - 1.0, 2.0 - 0.5773502691896258);
    CHECK(cert.rhs ==
          doctest::Approx(3.0 * (d0 * d0 + sum_a2) / (2.0 * sum_a))
              .epsilon(1e-14));
    CHECK(cert.holds);
    CHECK(cert.lhs >= -1e-9);
    CHECK(cert.inputs_echo.at("tau") == 3.0);
}

TEST_CASE("constant schedule reports its asymptotic floor") {
    auto m = euclid(2);
    auto o = Objective::distance(m, m.make_point({0, 0}));
    SolverConfig c;
    c.method = Method::Subgradient;
    c.max_iters = 50;
    c.rule = Exogenous{ScheduleKind::Constant, 0.25};
    auto tr = subgradient_method(o, m.make_point({5, 0}), c);
    auto cert = certify_subgrad_exogenous(tr, o);
    CHECK(cert.inputs_echo.at("schedule_floor") ==
          doctest::Approx(1.0 * 0.25 / 2.0));
    CHECK(cert.holds);
    // long-run rhs approaches but never undercuts the floor
    CHECK(cert.rhs > cert.inputs_echo.at("schedule_floor"));
}

TEST_CASE("polyak certificate checks both statements") {
    auto m = euclid(3);
    auto q = m.make_point({1, -2, 0.5});
    auto o = Objective::distance(m, q);
    SolverConfig c;
    c.method = Method::Subgradient;
    c.max_iters = 5;
    c.rule = Polyak{};
    auto p0 = m.make_point({4, 2, 0.5});
    auto tr = subgradient_method(o, p0, c);
    auto cert = certify_subgrad_polyak(tr, o);
    // one-step convergence: the squared-gap sum is d0² exactly, meeting
    // τ²d0² with equality (τ = 1)
    double d0 = 5.0;
    CHECK(cert.inputs_echo.at("sum_sq_lhs") ==
          doctest::Approx(d0 * d0).epsilon(1e-12));
    CHECK(cert.inputs_echo.at("sum_sq_rhs") ==
          doctest::Approx(d0 * d0).epsilon(1e-14));
    CHECK(cert.rhs ==
          doctest::Approx(d0 / std::sqrt(double(cert.N + 1))).epsilon(1e-14));
    CHECK(cert.holds);

    // degenerate start at the optimum
    auto t0 = subgradient_method(o, q, c);
    auto c0 = certify_subgrad_polyak(t0, o);
    CHECK(c0.lhs == 0.0);
    CHECK(c0.rhs == 0.0);
    CHECK(c0.holds);
}

TEST_CASE("prox value bound on the contraction example") {
    auto m = euclid(1);
    auto q = m.make_point({0});
    auto o = Objective::squared_distance(m, q, kInf);
    SolverConfig c;
    c.method = Method::ProximalPoint;
    c.max_iters = 3;
    c.rule = ConstantLambda{1.0};
    auto tr = proximal_point_method(o, m.make_point({2}), c);
    auto cert = certify_prox_value_rate(tr, o);
    CHECK(cert.N == 3);
    CHECK(cert.lhs == doctest::Approx(0.03125).epsilon(1e-12));  // ½(2/8)²
    CHECK(cert.rhs == doctest::Approx(0.5).epsilon(1e-14));      // 4/8
    CHECK(cert.holds);
    CHECK(cert.inputs_echo.at("inner_slack") == 0.0);
}

TEST_CASE("prox bound with an inner solver widens its tolerance") {
    auto m = spd(2);
    auto id = m.make_point({1, 0, 0, 1});
    auto q = m.make_point({4, 0, 0, 1});
    auto o = Objective::karcher(m, AnchorSet{{id, q}, {1, 1}},
                                DomainBall{id, 3.0});
    SolverConfig c;
    c.method = Method::ProximalPoint;
    c.max_iters = 50;
    c.rule = ConstantLambda{1.0};
    c.inner = InnerSolver{1e-10, 20000};
    auto tr = proximal_point_method(o, id, c);
    auto cert = certify_prox_value_rate(tr, o);
    CHECK(cert.holds);
    CHECK(cert.inputs_echo.at("inner_slack") > 0.0);
    CHECK(cert.tol >= cert.inputs_echo.at("inner_slack"));
    // the certified gap is tiny: the iterates sit on the mean by now
    CHECK(cert.lhs <= 1e-8);
}

TEST_CASE("prox bound refuses the sphere and non-prox traces") {
    auto m = euclid(2);
    auto o = flat_quadratic(m);
    auto tr = gradient_method(o, m.make_point({1, 1}), grad_cfg(2));
    CHECK_THROWS_AS(certify_prox_value_rate(tr, o), std::invalid_argument);
    CHECK_THROWS_AS(certify_subgrad_exogenous(tr, o), std::invalid_argument);
    CHECK_THROWS_AS(certify_subgrad_polyak(tr, o), std::invalid_argument);
}

TEST_CASE("value-style bounds are monotone over prefixes") {
    Sampler s(93);
    {
        auto m = sphere(3);
        auto q = m.random_point(s);
        auto o = Objective::squared_distance(m, q, 1.4);
        auto p0 = m.exp(q, m.random_tangent(q, s, 1.2));
        auto tr = gradient_method(o, p0, grad_cfg(300));
        int last = tr.records.back().k;
        for (int i = 0; i < 10; ++i) {
            int n = 1 + int(s.uniform() * double(last - 1));
            auto c = certify_grad_value_rate(trace_prefix(tr, n), o);
            CHECK(c.holds);
        }
    }
    {
        auto m = hyper(3);
        auto q = m.random_point(s);
        auto o = Objective::squared_distance(m, q, 3.0);
        auto p0 = m.exp(q, m.random_tangent(q, s, 2.0));
        SolverConfig c;
        c.method = Method::ProximalPoint;
        c.max_iters = 60;
        c.rule = ConstantLambda{0.5};
        auto tr = proximal_point_method(o, p0, c);
        int last = tr.records.back().k;
        for (int i = 0; i < 10; ++i) {
            int n = 1 + int(s.uniform() * double(last - 1));
            auto cert = certify_prox_value_rate(trace_prefix(tr, n), o);
            CHECK(cert.holds);
        }
    }
}

TEST_CASE("rhs depends only on run inputs, not the trace interior") {
    Sampler s(94);
    auto m = sphere(2);
    auto q = m.random_point(s);
    auto o = Objective::squared_distance(m, q, 1.4);
    auto p0 = m.exp(q, m.random_tangent(q, s, 1.0));
    auto t1 = gradient_method(o, p0, grad_cfg(50));
    auto t2 = gradient_method(o, p0, grad_cfg(50));
    auto c1 = certify_grad_value_rate(t1, o);
    auto c2 = certify_grad_value_rate(t2, o);
    CHECK(c1.rhs == c2.rhs);  // bitwise
    CHECK(c1.lhs == c2.lhs);
    // and a different interior (coarser prefix of a longer run) with the
    // same N gives the identical rhs
    auto t3 = trace_prefix(gradient_method(o, p0, grad_cfg(80)), 50);
    auto c3 = certify_grad_value_rate(t3, o);
    CHECK(c3.rhs == c1.rhs);
}

TEST_CASE("evaluate_certificates reports the method family") {
    Sampler s(95);
    {
        auto m = sphere(2);
        auto q = m.random_point(s);
        auto o = Objective::squared_distance(m, q, 1.4);
        auto p0 = m.exp(q, m.random_tangent(q, s, 1.0));
        auto outs = evaluate_certificates(gradient_method(o, p0, grad_cfg(20)), o);
        REQUIRE(outs.size() == 3);
        for (auto& oc : outs) {
            CHECK(oc.status == CertStatus::Pass);
            REQUIRE(oc.certificate.has_value());
            CHECK(oc.certificate->holds);
        }
    }
    {
        // hyperboloid gradient run: the curvature-dependent pair is
        // not applicable, the curvature-free bound still passes
        auto m = hyper(2);
        auto q = m.random_point(s);
        auto o = Objective::squared_distance(m, q, 2.0);
        auto p0 = m.exp(q, m.random_tangent(q, s, 1.0));
        auto outs = evaluate_certificates(gradient_method(o, p0, grad_cfg(20)), o);
        REQUIRE(outs.size() == 3);
        CHECK(outs[0].status == CertStatus::Pass);
        CHECK(outs[1].status == CertStatus::NotApplicable);
        CHECK(outs[2].status == CertStatus::NotApplicable);
        CHECK(outs[1].reason.find("curvature") != std::string::npos);
    }
    {
        // no optimum on a 3-anchor mean without an oracle: not applicable
        auto m = euclid(2);
        AnchorSet a{{m.make_point({0, 0}), m.make_point({2, 0}),
                     m.make_point({1, 3})},
                    {1, 1, 1}};
        auto o = Objective::fermat_weber(m, a);
        SolverConfig c;
        c.method = Method::Subgradient;
        c.max_iters = 10;
        c.rule = Exogenous{ScheduleKind::Constant, 0.1};
        auto outs =
            evaluate_certificates(subgradient_method(o, m.make_point({0, 1}), c), o);
        REQUIRE(outs.size() == 2);
        CHECK(outs[0].status == CertStatus::NotApplicable);
        CHECK(outs[0].reason.find("optimum") != std::string::npos);
        CHECK(outs[1].status == CertStatus::NotApplicable);  // and not Polyak rule
    }
}

TEST_CASE("trace prefixes keep bookkeeping consistent") {
    auto m = euclid(2);
    auto o = flat_quadratic(m);
    auto tr = gradient_method(o, m.make_point({2, 1}), grad_cfg(6));
    auto pre = trace_prefix(tr, 3);
    REQUIRE(pre.records.size() == 4);
    CHECK(pre.records.back().step_t == 0.0);
    CHECK(pre.records.back().k == 3);
    CHECK(pre.reason == TerminationReason::MaxIters);
    for (size_t i = 0; i < pre.records.size(); ++i)
        CHECK(pre.records[i].point.coords == tr.records[i].point.coords);
    CHECK_THROWS_AS(trace_prefix(tr, 7), std::invalid_argument);
    CHECK_THROWS_AS(trace_prefix(tr, -1), std::invalid_argument);
    auto full = trace_prefix(tr, 6);
    CHECK(full.reason == tr.reason);
}
