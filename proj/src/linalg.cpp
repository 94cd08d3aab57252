#include "geodescent/linalg.hpp"

#include "geodescent/errors.hpp"
#include "geodescent/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace geodescent::linalg {

namespace {

void check_size(int n) {
    if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
}

} // namespace

void symmetrize(double* A, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (A[i * n + j] + A[j * n + i]);
            A[i * n + j] = v;
            A[j * n + i] = v;
        }
    }
}

std::vector<double> symmetrized(const std::vector<double>& A, int n) {
    std::vector<double> B = A;
    symmetrize(B.data(), n);
    return B;
}

EigResult sym_eig(const double* A, int n) {
    check_size(n);
    std::vector<double> a(A, A + std::size_t(n) * n);
    symmetrize(a.data(), n);

    std::vector<double> V = identity(n);

    const double frob = std::sqrt(kernels::dot(a.data(), a.data(), a.size()));
    const double stop = std::max(frob, 1.0) * 1e-14;
    const int max_sweeps = 64;

    // off-diagonal norm decreases monotonically in exact arithmetic, so a
    // non-decrease means the rounding floor was reached
    double prev_off = std::numeric_limits<double>::infinity();
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        off = std::sqrt(2.0 * off);
        if (off <= stop || off >= prev_off) break;
        prev_off = off;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int i = 0; i < n; ++i) {
                    const double aip = a[i * n + p];
                    const double aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = a[p * n + j];
                    const double aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = V[i * n + p];
                    const double viq = V[i * n + q];
                    V[i * n + p] = c * vip - s * viq;
                    V[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw numerical_error("jacobi eigensolver did not converge");

    EigResult r;
    r.values.resize(n);
    for (int i = 0; i < n; ++i) r.values[i] = a[i * n + i];

    // sort ascending, permuting eigenvector columns to match
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return r.values[x] < r.values[y]; });
    std::vector<double> vals(n);
    std::vector<double> vecs(std::size_t(n) * n);
    for (int j = 0; j < n; ++j) {
        vals[j] = r.values[order[j]];
        for (int i = 0; i < n; ++i) vecs[i * n + j] = V[i * n + order[j]];
    }
    r.values = std::move(vals);
    r.vectors = std::move(vecs);
    return r;
}

EigResult sym_eig(const std::vector<double>& A, int n) {
    if (A.size() != std::size_t(n) * n)
        throw std::invalid_argument("sym_eig: buffer size mismatch");
    return sym_eig(A.data(), n);
}

double sym_min_eig(const std::vector<double>& A, int n) {
    return sym_eig(A, n).values.front();
}

std::vector<double> eig_fn(const EigResult& e, int n,
                           const std::function<double(double)>& f) {
    // B = V f(D) V^T
    std::vector<double> W(std::size_t(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            W[i * n + j] = e.vectors[i * n + j] * f(e.values[j]);
    }
    std::vector<double> B(std::size_t(n) * n);
    kernels::matmul(W.data(), transpose(e.vectors, n).data(), B.data(), n, n,
                    n);
    symmetrize(B.data(), n);
    return B;
}

std::vector<double> sym_fn(const std::vector<double>& A, int n,
                           const std::function<double(double)>& f) {
    return eig_fn(sym_eig(A, n), n, f);
}

namespace {

void require_positive(const std::vector<double>& A, int n, const char* what) {
    const double mn = sym_min_eig(A, n);
    if (!(mn > 0.0))
        throw std::invalid_argument(std::string(what) +
                                    ": matrix is not positive definite");
}

} // namespace

std::vector<double> sym_exp(const std::vector<double>& A, int n) {
    return sym_fn(A, n, [](double x) { return std::exp(x); });
}

std::vector<double> sym_log(const std::vector<double>& A, int n) {
    require_positive(A, n, "sym_log");
    return sym_fn(A, n, [](double x) { return std::log(x); });
}

std::vector<double> sym_sqrt(const std::vector<double>& A, int n) {
    require_positive(A, n, "sym_sqrt");
    return sym_fn(A, n, [](double x) { return std::sqrt(x); });
}

std::vector<double> sym_inv_sqrt(const std::vector<double>& A, int n) {
    require_positive(A, n, "sym_inv_sqrt");
    return sym_fn(A, n, [](double x) { return 1.0 / std::sqrt(x); });
}

std::vector<double> matmul(const std::vector<double>& A,
                           const std::vector<double>& B, int n) {
    std::vector<double> C(std::size_t(n) * n);
    kernels::matmul(A.data(), B.data(), C.data(), n, n, n);
    return C;
}

std::vector<double> congruence(const std::vector<double>& E,
                               const std::vector<double>& A, int n) {
    return matmul(matmul(E, A, n), transpose(E, n), n);
}

std::vector<double> transpose(const std::vector<double>& A, int n) {
    std::vector<double> T(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T[j * n + i] = A[i * n + j];
    return T;
}

std::vector<double> identity(int n) {
    std::vector<double> I(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) I[i * n + i] = 1.0;
    return I;
}

} // namespace geodescent::linalg
