#include "geodescent/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define GEODESCENT_X86 1
#include <immintrin.h>
#elif defined(__aarch64__) || defined(__ARM_NEON)
#define GEODESCENT_ARM 1
#include <arm_neon.h>
#endif

namespace geodescent::kernels {

namespace {

// ---- scalar reference kernels ----

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double minkowski_dot_scalar(const double* a, const double* b,
                            std::size_t n) noexcept {
    if (n == 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += a[i] * b[i];
    return s - a[n - 1] * b[n - 1];
}

void axpy_scalar(double alpha, const double* x, double* y,
                 std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void combine_scalar(double a, const double* x, double b, const double* y,
                    double* out, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void matmul_scalar(const double* A, const double* B, double* C, std::size_t m,
                   std::size_t k, std::size_t n) noexcept {
    std::memset(C, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const double a = A[i * k + l];
            const double* brow = B + l * n;
            double* crow = C + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += a * brow[j];
        }
    }
}

#if defined(GEODESCENT_X86)

// ---- AVX2+FMA kernels ----

__attribute__((target("avx2,fma"))) double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a,
                                                    const double* b,
                                                    std::size_t n) noexcept {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                              acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2,fma"))) double
minkowski_dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
    if (n == 0) return 0.0;
    return dot_avx2(a, b, n - 1) - a[n - 1] * b[n - 1];
}

__attribute__((target("avx2,fma"))) void
axpy_avx2(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) void scal_avx2(double alpha, double* x,
                                                   std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

__attribute__((target("avx2,fma"))) void
combine_avx2(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        v = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), v);
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

__attribute__((target("avx2,fma"))) void
matmul_avx2(const double* A, const double* B, double* C, std::size_t m,
            std::size_t k, std::size_t n) noexcept {
    std::memset(C, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = C + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double a = A[i * k + l];
            const double* brow = B + l * n;
            const __m256d va = _mm256_set1_pd(a);
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d vc = _mm256_loadu_pd(crow + j);
                vc = _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j), vc);
                _mm256_storeu_pd(crow + j, vc);
            }
            for (; j < n; ++j) crow[j] += a * brow[j];
        }
    }
}

bool avx2_supported() noexcept {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#elif defined(GEODESCENT_ARM)

// ---- NEON kernels ----

double dot_neon(const double* a, const double* b, std::size_t n) noexcept {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double minkowski_dot_neon(const double* a, const double* b,
                          std::size_t n) noexcept {
    if (n == 0) return 0.0;
    return dot_neon(a, b, n - 1) - a[n - 1] * b[n - 1];
}

void axpy_neon(double alpha, const double* x, double* y,
               std::size_t n) noexcept {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_neon(double alpha, double* x, std::size_t n) noexcept {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void combine_neon(double a, const double* x, double b, const double* y,
                  double* out, std::size_t n) noexcept {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vmulq_f64(va, vld1q_f64(x + i));
        v = vfmaq_f64(v, vb, vld1q_f64(y + i));
        vst1q_f64(out + i, v);
    }
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void matmul_neon(const double* A, const double* B, double* C, std::size_t m,
                 std::size_t k, std::size_t n) noexcept {
    std::memset(C, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = C + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const float64x2_t va = vdupq_n_f64(A[i * k + l]);
            const double* brow = B + l * n;
            std::size_t j = 0;
            for (; j + 2 <= n; j += 2) {
                float64x2_t vc = vld1q_f64(crow + j);
                vc = vfmaq_f64(vc, va, vld1q_f64(brow + j));
                vst1q_f64(crow + j, vc);
            }
            for (; j < n; ++j) crow[j] += A[i * k + l] * brow[j];
        }
    }
}

#endif

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    double (*minkowski_dot)(const double*, const double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*scal)(double, double*, std::size_t) noexcept;
    void (*combine)(double, const double*, double, const double*, double*,
                    std::size_t) noexcept;
    void (*matmul)(const double*, const double*, double*, std::size_t,
                   std::size_t, std::size_t) noexcept;
};

constexpr KernelTable kScalarTable{dot_scalar,    minkowski_dot_scalar,
                                   axpy_scalar,   scal_scalar,
                                   combine_scalar, matmul_scalar};

#if defined(GEODESCENT_X86)
constexpr KernelTable kSimdTable{dot_avx2,    minkowski_dot_avx2, axpy_avx2,
                                 scal_avx2,   combine_avx2,       matmul_avx2};
#elif defined(GEODESCENT_ARM)
constexpr KernelTable kSimdTable{dot_neon,    minkowski_dot_neon, axpy_neon,
                                 scal_neon,   combine_neon,       matmul_neon};
#endif

Backend detect_backend() noexcept {
#if defined(GEODESCENT_X86)
    if (avx2_supported()) return Backend::Avx2;
#elif defined(GEODESCENT_ARM)
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

const KernelTable& table() noexcept {
    switch (g_backend.load(std::memory_order_relaxed)) {
    case Backend::Scalar:
        return kScalarTable;
    default:
#if defined(GEODESCENT_X86) || defined(GEODESCENT_ARM)
        return kSimdTable;
#else
        return kScalarTable;
#endif
    }
}

} // namespace

Backend active_backend() noexcept {
    return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(GEODESCENT_X86)
        return avx2_supported();
#else
        return false;
#endif
    case Backend::Neon:
#if defined(GEODESCENT_ARM)
        return true;
#else
        return false;
#endif
    }
    return false;
}

void force_backend(Backend b) {
    if (!backend_available(b))
        throw std::invalid_argument("kernel backend not available: " +
                                    std::string(backend_name(b)));
    g_backend.store(b, std::memory_order_relaxed);
}

void clear_forced_backend() noexcept {
    g_backend.store(detect_backend(), std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
    case Backend::Scalar:
        return "scalar";
    case Backend::Avx2:
        return "avx2";
    case Backend::Neon:
        return "neon";
    }
    return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
    return table().dot(a, b, n);
}

double minkowski_dot(const double* a, const double* b, std::size_t n) noexcept {
    return table().minkowski_dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    table().axpy(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) noexcept {
    table().scal(alpha, x, n);
}

void combine(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) noexcept {
    table().combine(a, x, b, y, out, n);
}

void matmul(const double* A, const double* B, double* C, std::size_t m,
            std::size_t k, std::size_t n) noexcept {
    table().matmul(A, B, C, m, k, n);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: size mismatch");
    return dot(a.data(), b.data(), a.size());
}

double minkowski_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("minkowski_dot: bad sizes");
    return minkowski_dot(a.data(), b.data(), a.size());
}

double nrm2(std::span<const double> a) {
    return std::sqrt(dot(a.data(), a.data(), a.size()));
}

} // namespace geodescent::kernels
