#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "geodescent/kernels.hpp"

using namespace geodescent;

namespace {

// Plain long-double accumulation as the independent reference.
long double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<long double>(a[i]) * b[i];
    return acc;
}

long double ref_mdot(const std::vector<double>& a,
                     const std::vector<double>& b) {
    if (a.empty()) return 0.0L;
    long double acc = 0.0L;
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        acc += static_cast<long double>(a[i]) * b[i];
    acc -= static_cast<long double>(a.back()) * b.back();
    return acc;
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = g(rng);
    return v;
}

const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 4, 7, 8,
                                         9, 15, 16, 17, 64, 1000};

std::vector<kernels::Backend> available_backends() {
    std::vector<kernels::Backend> out = {kernels::Backend::Scalar};
    for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon})
        if (kernels::backend_available(b)) out.push_back(b);
    return out;
}

struct BackendGuard {
    ~BackendGuard() { kernels::clear_forced_backend(); }
};

} // namespace

TEST_CASE("dot matches long-double reference on every backend") {
    std::mt19937_64 rng(7);
    BackendGuard guard;
    for (auto backend : available_backends()) {
        kernels::force_backend(backend);
        for (std::size_t n : kSizes) {
            auto a = random_vec(rng, n);
            auto b = random_vec(rng, n);
            double got = kernels::dot(a.data(), b.data(), n);
            long double want = ref_dot(a, b);
            double scale = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                scale += std::abs(a[i] * b[i]);
            CHECK(std::abs(got - static_cast<double>(want)) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("minkowski_dot negates the last coordinate") {
    std::mt19937_64 rng(8);
    BackendGuard guard;
    for (auto backend : available_backends()) {
        kernels::force_backend(backend);
        for (std::size_t n : kSizes) {
            auto a = random_vec(rng, n);
            auto b = random_vec(rng, n);
            double got = kernels::minkowski_dot(a.data(), b.data(), n);
            long double want = ref_mdot(a, b);
            double scale = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                scale += std::abs(a[i] * b[i]);
            CHECK(std::abs(got - static_cast<double>(want)) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("axpy, scal, combine match elementwise arithmetic") {
    std::mt19937_64 rng(9);
    BackendGuard guard;
    for (auto backend : available_backends()) {
        kernels::force_backend(backend);
        for (std::size_t n : kSizes) {
            auto x = random_vec(rng, n);
            auto y = random_vec(rng, n);

            auto y1 = y;
            kernels::axpy(0.37, x.data(), y1.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(y1[i] == doctest::Approx(y[i] + 0.37 * x[i]).epsilon(1e-14));

            auto x1 = x;
            kernels::scal(-2.5, x1.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(x1[i] == doctest::Approx(-2.5 * x[i]).epsilon(1e-14));

            std::vector<double> out(n);
            kernels::combine(1.25, x.data(), -0.75, y.data(), out.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(out[i] ==
                      doctest::Approx(1.25 * x[i] - 0.75 * y[i]).epsilon(1e-14));

            // aliased output is allowed
            auto x2 = x;
            kernels::combine(0.5, x2.data(), 2.0, y.data(), x2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(x2[i] ==
                      doctest::Approx(0.5 * x[i] + 2.0 * y[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("matmul matches the naive triple loop") {
    std::mt19937_64 rng(10);
    BackendGuard guard;
    for (auto backend : available_backends()) {
        kernels::force_backend(backend);
        for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
                 {1, 1, 1}, {2, 3, 4}, {5, 5, 5}, {8, 8, 8}, {7, 9, 11}}) {
            auto A = random_vec(rng, m * k);
            auto B = random_vec(rng, k * n);
            std::vector<double> C(m * n);
            kernels::matmul(A.data(), B.data(), C.data(), m, k, n);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    long double acc = 0.0L;
                    for (std::size_t t = 0; t < k; ++t)
                        acc += static_cast<long double>(A[i * k + t]) *
                               B[t * n + j];
                    CHECK(std::abs(C[i * n + j] - static_cast<double>(acc)) <=
                          1e-12 * (1.0 + std::abs(static_cast<double>(acc))));
                }
            }
        }
    }
}

TEST_CASE("forcing an unavailable backend is rejected") {
    BackendGuard guard;
    CHECK(kernels::backend_available(kernels::Backend::Scalar));
    bool has_avx2 = kernels::backend_available(kernels::Backend::Avx2);
    bool has_neon = kernels::backend_available(kernels::Backend::Neon);
    CHECK_FALSE((has_avx2 && has_neon));  // never both on one machine
    if (!has_avx2)
        CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::Avx2),
                        std::invalid_argument);
    if (!has_neon)
        CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::Neon),
                        std::invalid_argument);
    kernels::force_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    kernels::clear_forced_backend();
}

TEST_CASE("span conveniences agree with raw kernels") {
    std::mt19937_64 rng(11);
    auto a = random_vec(rng, 33);
    auto b = random_vec(rng, 33);
    CHECK(kernels::dot(std::span<const double>(a), std::span<const double>(b)) ==
          kernels::dot(a.data(), b.data(), a.size()));
    CHECK(kernels::minkowski_dot(std::span<const double>(a),
                                 std::span<const double>(b)) ==
          kernels::minkowski_dot(a.data(), b.data(), a.size()));
    CHECK(kernels::nrm2(std::span<const double>(a)) ==
          doctest::Approx(std::sqrt(kernels::dot(a.data(), a.data(), a.size())))
              .epsilon(1e-15));
}
