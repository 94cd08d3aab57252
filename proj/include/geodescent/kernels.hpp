#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace geodescent::kernels {

/// Arithmetic backend for the flat vector/matrix kernels.
/// Scalar is always available and is the reference semantics; SIMD variants
/// are selected at runtime when the CPU supports them.
enum class Backend { Scalar, Avx2, Neon };

/// Backend currently used by the kernel entry points.
Backend active_backend() noexcept;

/// True if the given backend can run on this machine.
bool backend_available(Backend b) noexcept;

/// Pin the active backend (testing and benchmarking hook).
/// Throws std::invalid_argument if the backend is not available.
void force_backend(Backend b);

/// Return to automatic runtime selection.
void clear_forced_backend() noexcept;

std::string_view backend_name(Backend b) noexcept;

// Raw-pointer kernels. All buffers must not alias unless stated.

/// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n) noexcept;

/// Lorentzian product: sum_{i<n-1} a[i]*b[i]  -  a[n-1]*b[n-1];
/// zero when n == 0.
double minkowski_dot(const double* a, const double* b, std::size_t n) noexcept;

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;

/// x *= alpha
void scal(double alpha, double* x, std::size_t n) noexcept;

/// out = a*x + b*y. `out` may alias x or y.
void combine(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) noexcept;

/// Row-major C = A * B with A m-by-k, B k-by-n. C must not alias A or B.
void matmul(const double* A, const double* B, double* C, std::size_t m,
            std::size_t k, std::size_t n) noexcept;

// Span conveniences used by the geometry layer.

double dot(std::span<const double> a, std::span<const double> b);
double minkowski_dot(std::span<const double> a, std::span<const double> b);
double nrm2(std::span<const double> a);

} // namespace geodescent::kernels
