#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "geodescent/audits.hpp"
#include "geodescent/geometry.hpp"
#include "geodescent/objectives.hpp"

using namespace geodescent;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Manifold euclid(int n) { return Manifold::make(ManifoldKind::Euclidean, n); }
Manifold sphere(int n) { return Manifold::make(ManifoldKind::Sphere, n); }
Manifold hyper(int n) { return Manifold::make(ManifoldKind::Hyperboloid, n); }
Manifold spd(int n) { return Manifold::make(ManifoldKind::Spd, n); }

const AuditReport* find(const std::vector<AuditReport>& v, const std::string& id) {
    for (auto& r : v)
        if (r.suite_id == id) return &r;
    return nullptr;
}

void expect_clean(const std::vector<AuditReport>& v) {
    for (auto& r : v) {
        CAPTURE(r.suite_id);
        CHECK(r.violations == 0);
        if (r.samples > 0) CHECK(r.worst_margin >= 0.0);
    }
}

} // namespace

TEST_CASE("flat squared distance passes every applicable suite") {
    auto m = euclid(4);
    Sampler s(100);
    auto o = Objective::squared_distance(m, m.random_point(s), kInf);
    auto reports = run_audit_suites(m, o, 42, 400);
    expect_clean(reports);

    std::set<std::string> ids;
    for (auto& r : reports) ids.insert(r.suite_id);
    // flat space runs both comparison directions, and the unbounded domain
    // declares no function-Lipschitz constant
    CHECK(ids.count("geom/exp_log_roundtrip") == 1);
    CHECK(ids.count("geom/comparison_nonneg") == 1);
    CHECK(ids.count("geom/comparison_nonpos") == 1);
    CHECK(ids.count("obj/first_order_convexity") == 1);
    CHECK(ids.count("obj/descent_lemma") == 1);
    CHECK(ids.count("obj/grad_fd_slope") == 1);
    CHECK(ids.count("obj/prox_optimality") == 1);
    CHECK(ids.count("obj/optimum_lower_bound") == 1);
    CHECK(ids.count("obj/func_lipschitz") == 0);
    CHECK(ids.count("solver/grad_step_decrease") == 1);
    CHECK(ids.count("solver/grad_variational_step") == 1);
    CHECK(ids.count("solver/prox_characterization") == 1);
    CHECK(ids.count("solver/prox_first_order_residual") == 1);
    CHECK(ids.count("obj/subgrad_inequality") == 0);  // smooth spelling instead
}

TEST_CASE("sphere squared distance stays clean, including subgradient suites") {
    auto m = sphere(3);
    Sampler s(101);
    auto o = Objective::squared_distance(m, m.random_point(s), 1.4);
    auto reports = run_audit_suites(m, o, 7, 400);
    expect_clean(reports);
    CHECK(find(reports, "geom/comparison_nonneg") != nullptr);
    CHECK(find(reports, "geom/comparison_nonpos") == nullptr);
    CHECK(find(reports, "obj/func_lipschitz") != nullptr);  // τ = R on the ball
    CHECK(find(reports, "solver/subgrad_fundamental_ineq") != nullptr);
    CHECK(find(reports, "solver/polyak_dist_monotone") != nullptr);
    // no prox machinery on positively curved space
    CHECK(find(reports, "solver/prox_characterization") == nullptr);
    CHECK(find(reports, "obj/prox_optimality") == nullptr);
}

TEST_CASE("hyperbolic mean problem exercises the prox suites") {
    auto m = hyper(3);
    Sampler s(102);
    auto c = m.random_point(s);
    AnchorSet a;
    for (int i = 0; i < 3; ++i) {
        a.anchors.push_back(m.exp(c, m.random_tangent(c, s, 1.0)));
        a.weights.push_back(0.5 + s.uniform());
    }
    auto o = Objective::karcher(m, a, DomainBall{c, 1.5});
    auto reports = run_audit_suites(m, o, 11, 300);
    expect_clean(reports);
    CHECK(find(reports, "geom/comparison_nonpos") != nullptr);
    CHECK(find(reports, "geom/comparison_nonneg") == nullptr);
    CHECK(find(reports, "solver/prox_characterization") != nullptr);
    // inner-solver prox on a karcher objective: no closed form, so the
    // first-order residual suite (exact prox only) must be absent
    CHECK(find(reports, "solver/prox_first_order_residual") == nullptr);
    // negative curvature: no subgradient-method suites
    CHECK(find(reports, "solver/subgrad_fundamental_ineq") == nullptr);
}

TEST_CASE("spd karcher pair runs the inner prox suites clean") {
    auto m = spd(2);
    auto id = m.make_point({1, 0, 0, 1});
    auto q = m.make_point({4, 0, 0, 1});
    auto o = Objective::karcher(m, AnchorSet{{id, q}, {1, 1}},
                                DomainBall{id, 3.0});
    auto reports = run_audit_suites(m, o, 13, 200);
    expect_clean(reports);
    CHECK(find(reports, "solver/prox_characterization") != nullptr);
}

TEST_CASE("nonsmooth objectives run the subgradient spelling") {
    auto m = euclid(3);
    AnchorSet a{{m.make_point({0, 0, 0}), m.make_point({1, 0, 1}),
                 m.make_point({0, 2, 0})},
                {1, 1, 2}};
    auto o = Objective::fermat_weber(m, a);
    auto reports = run_audit_suites(m, o, 5, 300);
    expect_clean(reports);
    CHECK(find(reports, "obj/subgrad_inequality") != nullptr);
    CHECK(find(reports, "obj/first_order_convexity") == nullptr);
    CHECK(find(reports, "obj/descent_lemma") == nullptr);
    CHECK(find(reports, "obj/grad_fd_slope") == nullptr);
    CHECK(find(reports, "obj/func_lipschitz") != nullptr);
    // no optimum is declared for three anchors, so no solver subgrad suites
    CHECK(find(reports, "solver/subgrad_fundamental_ineq") == nullptr);
}

TEST_CASE("reports are deterministic given seed and samples") {
    auto m = sphere(2);
    Sampler s(103);
    auto o = Objective::squared_distance(m, m.random_point(s), 1.2);
    auto a = run_audit_suites(m, o, 99, 250);
    auto b = run_audit_suites(m, o, 99, 250);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].suite_id == b[i].suite_id);
        CHECK(a[i].samples == b[i].samples);
        CHECK(a[i].violations == b[i].violations);
        CHECK(a[i].worst_margin == b[i].worst_margin);  // bitwise
        CHECK(a[i].seed == 99);
    }
    auto c = run_audit_suites(m, o, 100, 250);
    bool any_different = false;
    for (size_t i = 0; i < a.size() && i < c.size(); ++i)
        if (a[i].worst_margin != c[i].worst_margin) any_different = true;
    CHECK(any_different);
}

TEST_CASE("a wrong lipschitz declaration is caught by the descent suite") {
    auto m = hyper(3);
    Sampler s(104);
    auto q = m.random_point(s);
    auto o = Objective::squared_distance(m, q, 2.5);
    // halving L understates the curvature correction R·coth(R)
    o.override_grad_lipschitz(o.grad_lipschitz().value() / 2.0);
    auto reports = run_audit_suites(m, o, 21, 600);
    auto* descent = find(reports, "obj/descent_lemma");
    REQUIRE(descent != nullptr);
    CHECK(descent->violations > 0);
    CHECK(descent->worst_margin < 0.0);
    // geometry suites are untouched by the bad declaration
    for (auto& r : reports)
        if (r.suite_id.rfind("geom/", 0) == 0) CHECK(r.violations == 0);
}

TEST_CASE("audit preconditions") {
    auto m = euclid(2);
    auto o = Objective::squared_distance(m, m.make_point({0, 0}), kInf);
    CHECK_THROWS_AS(run_audit_suites(m, o, 1, 0), std::invalid_argument);
    auto other = sphere(2);
    Sampler s(105);
    auto so = Objective::squared_distance(other, other.random_point(s), 1.0);
    CHECK_THROWS_AS(run_audit_suites(m, so, 1, 10), std::invalid_argument);
}
