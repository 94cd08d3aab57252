#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "geodescent/errors.hpp"
#include "geodescent/linalg.hpp"

using namespace geodescent;

namespace {

std::vector<double> random_symmetric(std::mt19937_64& rng, int n,
                                     double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    std::vector<double> a(std::size_t(n) * n);
    for (double& x : a) x = g(rng);
    linalg::symmetrize(a.data(), n);
    return a;
}

double frob_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double frob(const std::vector<double>& a) {
    double acc = 0.0;
    for (double x : a) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("2x2 eigenvalues in closed form") {
    // [[0,1],[1,0]] has eigenvalues -1, 1
    auto e = linalg::sym_eig({0.0, 1.0, 1.0, 0.0}, 2);
    REQUIRE(e.values.size() == 2);
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));

    // [[2,1],[1,2]] has eigenvalues 1, 3
    auto e2 = linalg::sym_eig({2.0, 1.0, 1.0, 2.0}, 2);
    CHECK(e2.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e2.values[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eigendecomposition reconstructs and is orthogonal") {
    std::mt19937_64 rng(21);
    for (int n : {1, 2, 3, 5, 8, 20}) {
        for (int rep = 0; rep < 5; ++rep) {
            auto a = random_symmetric(rng, n);
            auto e = linalg::sym_eig(a, n);

            // V D V^T == A
            std::vector<double> vd(std::size_t(n) * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    vd[i * n + j] = e.vectors[i * n + j] * e.values[j];
            auto rec = linalg::matmul(vd, linalg::transpose(e.vectors, n), n);
            CHECK(frob_diff(rec, a) <= 1e-12 * std::max(1.0, frob(a)));

            // V^T V == I
            auto vtv =
                linalg::matmul(linalg::transpose(e.vectors, n), e.vectors, n);
            CHECK(frob_diff(vtv, linalg::identity(n)) <= 1e-13 * n);

            // ascending order
            for (int j = 1; j < n; ++j) CHECK(e.values[j - 1] <= e.values[j]);
        }
    }
}

TEST_CASE("sym_exp and sym_log are mutual inverses") {
    std::mt19937_64 rng(22);
    for (int n : {2, 4, 6}) {
        auto a = random_symmetric(rng, n, 0.6);
        auto ea = linalg::sym_exp(a, n);
        auto back = linalg::sym_log(ea, n);
        CHECK(frob_diff(back, a) <= 1e-11 * std::max(1.0, frob(a)));
    }
}

TEST_CASE("sym_sqrt squares back to the input") {
    std::mt19937_64 rng(23);
    for (int n : {2, 5}) {
        auto a = random_symmetric(rng, n, 0.5);
        auto pd = linalg::sym_exp(a, n);  // guaranteed positive definite
        auto r = linalg::sym_sqrt(pd, n);
        CHECK(frob_diff(linalg::matmul(r, r, n), pd) <=
              1e-11 * std::max(1.0, frob(pd)));
        auto ri = linalg::sym_inv_sqrt(pd, n);
        CHECK(frob_diff(linalg::matmul(r, ri, n), linalg::identity(n)) <=
              1e-11);
    }
}

TEST_CASE("matrix log of the identity is zero and of diag is elementwise") {
    auto l = linalg::sym_log(linalg::identity(3), 3);
    CHECK(frob(l) <= 1e-14);

    std::vector<double> d = {std::exp(1.0), 0.0, 0.0, std::exp(2.0)};
    auto ld = linalg::sym_log(d, 2);
    CHECK(ld[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ld[3] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(ld[1]) <= 1e-14);
}

TEST_CASE("positive definiteness is required where it must be") {
    std::vector<double> indef = {1.0, 0.0, 0.0, -1.0};
    CHECK_THROWS_AS(linalg::sym_log(indef, 2), std::invalid_argument);
    CHECK_THROWS_AS(linalg::sym_sqrt(indef, 2), std::invalid_argument);
    CHECK_THROWS_AS(linalg::sym_inv_sqrt(indef, 2), std::invalid_argument);
    CHECK(linalg::sym_min_eig(indef, 2) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("congruence computes E A E^T") {
    std::vector<double> e = {1.0, 2.0, 0.0, 1.0};
    std::vector<double> a = {1.0, 0.0, 0.0, 1.0};
    auto c = linalg::congruence(e, a, 2);
    // E E^T = [[5,2],[2,1]]
    CHECK(c[0] == doctest::Approx(5.0));
    CHECK(c[1] == doctest::Approx(2.0));
    CHECK(c[2] == doctest::Approx(2.0));
    CHECK(c[3] == doctest::Approx(1.0));
}
