#pragma once

#include <functional>
#include <vector>

namespace geodescent::linalg {

/// Symmetric eigendecomposition A = V diag(values) V^T.
/// `vectors` is row-major n-by-n; column j holds the eigenvector for
/// values[j]. Eigenvalues are sorted ascending.
struct EigResult {
    std::vector<double> values;
    std::vector<double> vectors;
};

/// A <- (A + A^T)/2, in place. Row-major n-by-n.
void symmetrize(double* A, int n);
std::vector<double> symmetrized(const std::vector<double>& A, int n);

/// Cyclic Jacobi eigensolver for a symmetric matrix (row-major n-by-n).
/// The input is symmetrized before decomposition.
/// Throws geodescent numerical_error if the sweep limit is hit.
EigResult sym_eig(const double* A, int n);
EigResult sym_eig(const std::vector<double>& A, int n);

double sym_min_eig(const std::vector<double>& A, int n);

/// V f(diag) V^T for a symmetric A.
std::vector<double> sym_fn(const std::vector<double>& A, int n,
                           const std::function<double(double)>& f);

/// Same, assembled from an existing decomposition.
std::vector<double> eig_fn(const EigResult& e, int n,
                           const std::function<double(double)>& f);

/// Matrix exponential of a symmetric matrix.
std::vector<double> sym_exp(const std::vector<double>& A, int n);

/// Matrix logarithm; requires all eigenvalues > 0.
std::vector<double> sym_log(const std::vector<double>& A, int n);

/// Principal square root; requires all eigenvalues > 0.
std::vector<double> sym_sqrt(const std::vector<double>& A, int n);

/// Inverse principal square root; requires all eigenvalues > 0.
std::vector<double> sym_inv_sqrt(const std::vector<double>& A, int n);

/// Row-major product C = A*B for square n-by-n matrices.
std::vector<double> matmul(const std::vector<double>& A,
                           const std::vector<double>& B, int n);

/// E A E^T.
std::vector<double> congruence(const std::vector<double>& E,
                               const std::vector<double>& A, int n);

std::vector<double> transpose(const std::vector<double>& A, int n);

std::vector<double> identity(int n);

} // namespace geodescent::linalg
