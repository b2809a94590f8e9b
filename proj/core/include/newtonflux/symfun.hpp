#pragma once

// Elementary symmetric functions and Newton transformations of symmetric
// matrices, plus the bordered-matrix and shifted-argument expansions used on
// the boundary of a hypersurface.

#include "newtonflux/types.hpp"

#include <span>
#include <vector>

namespace newtonflux {

/// Coefficients sigma_0..sigma_n of prod_i (t + x_i), i.e. the elementary
/// symmetric functions of the inputs. sigma[0] is exactly 1.
struct SymCoeffs {
  int n = 0;
  std::vector<double> sigma;

  double operator[](int r) const { return (r < 0 || r > n) ? 0.0 : sigma[r]; }
};

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues are sorted in
/// descending order; column k of `vectors` belongs to `values[k]`.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
  int sweeps = 0;
};

struct JacobiOptions {
  double tolerance = 1e-14;  // on off-diagonal Frobenius norm, relative to ||A||_F
  int max_sweeps = 50;
};

/// Newton transformations T_0..T_n of a symmetric matrix together with the
/// invariants S_r = sigma_r(eigenvalues) and H_r = S_r / C(n, r).
struct NewtonSeq {
  int n = 0;
  std::vector<Matrix> T;
  std::vector<double> S;
  std::vector<double> H;
  Vector kappa;   // eigenvalues, descending
  Matrix frame;   // eigenvectors matching kappa
};

struct TraceResiduals {
  double trace_T = 0.0;    // max_r |tr(T_r) - (n - r) S_r|
  double trace_AT = 0.0;   // max_r |tr(A T_r) - (r + 1) S_{r+1}|
};

SymCoeffs elem_sym(std::span<const double> values);

/// sigma_m of `values` with entry `omit` removed.
SymCoeffs elem_sym_omitting(std::span<const double> values, std::size_t omit);

SymmetricEigen jacobi_eigen(const Matrix& A, const JacobiOptions& options = {});

NewtonSeq newton_transforms(const Matrix& A);

TraceResiduals trace_identities(const NewtonSeq& seq, const Matrix& A);

/// s_r of gamma_i = alpha_i + beta via the binomial expansion in s_j(alpha).
SymCoeffs shifted_sym(std::span<const double> alpha, double beta);

/// S_0..S_n of the bordered symmetric matrix
///   [ diag(gamma)  offdiag ]
///   [ offdiag^T    corner  ]
/// expanded in the symmetric functions of gamma.
SymCoeffs bordered_invariants(std::span<const double> gamma,
                              std::span<const double> offdiag, double corner);

/// Assembles the bordered matrix that `bordered_invariants` expands.
Matrix bordered_matrix(std::span<const double> gamma,
                       std::span<const double> offdiag, double corner);

/// Tolerance scale (1 + ||A||_inf)^n used by every identity check on A.
double conditioning_scale(const Matrix& A);

}  // namespace newtonflux
