#include "newtonflux/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace newtonflux {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::degenerate_immersion: return "degenerate-immersion";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::integration: return "integration";
    case ErrorKind::precondition_violation: return "precondition-violation";
    case ErrorKind::unsupported_region: return "unsupported-region";
    case ErrorKind::invalid_parameters: return "invalid-parameters";
  }
  return "unknown";
}

double binomial(int n, int k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::invalid_input, std::string(what) + ": non-finite input");
    }
  }
}

}  // namespace

SymCoeffs elem_sym(std::span<const double> values) {
  require_finite(values, "elem_sym");
  const int n = static_cast<int>(values.size());
  SymCoeffs out{n, std::vector<double>(n + 1, 0.0)};
  out.sigma[0] = 1.0;
  // Multiply in one factor (t + x) at a time; sigma[r] is the t^{k-r} coefficient.
  for (int k = 0; k < n; ++k) {
    const double x = values[k];
    for (int r = k + 1; r >= 1; --r) out.sigma[r] += x * out.sigma[r - 1];
  }
  return out;
}

SymCoeffs elem_sym_omitting(std::span<const double> values, std::size_t omit) {
  std::vector<double> rest;
  rest.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != omit) rest.push_back(values[i]);
  }
  return elem_sym(rest);
}

SymmetricEigen jacobi_eigen(const Matrix& A_in, const JacobiOptions& options) {
  if (A_in.rows() != A_in.cols()) {
    throw Error(ErrorKind::invalid_input, "jacobi_eigen: matrix is not square");
  }
  if (!A_in.allFinite()) {
    throw Error(ErrorKind::invalid_input, "jacobi_eigen: non-finite matrix");
  }
  const Eigen::Index n = A_in.rows();
  Matrix A = 0.5 * (A_in + A_in.transpose());
  Matrix V = Matrix::Identity(n, n);
  const double scale = A.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < options.max_sweeps; ++sweep) {
    if (scale == 0.0 || off_norm() <= options.tolerance * scale) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's rotation: annihilate A(p,q).
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p);
          const double vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return A(a, a) > A(b, b); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = A(order[k], order[k]);
    out.vectors.col(k) = V.col(order[k]);
  }
  return out;
}

NewtonSeq newton_transforms(const Matrix& A_in) {
  if (A_in.rows() != A_in.cols() || A_in.rows() == 0) {
    throw Error(ErrorKind::invalid_input, "newton_transforms: matrix must be square and non-empty");
  }
  if (!A_in.allFinite()) {
    throw Error(ErrorKind::invalid_input, "newton_transforms: non-finite matrix");
  }
  const int n = static_cast<int>(A_in.rows());
  const Matrix A = 0.5 * (A_in + A_in.transpose());
  const SymmetricEigen eig = jacobi_eigen(A);
  const SymCoeffs sig = elem_sym(std::span<const double>(eig.values.data(), n));

  NewtonSeq seq;
  seq.n = n;
  seq.kappa = eig.values;
  seq.frame = eig.vectors;
  seq.S = sig.sigma;
  seq.H.resize(n + 1);
  for (int r = 0; r <= n; ++r) seq.H[r] = seq.S[r] / binomial(n, r);

  seq.T.reserve(n + 1);
  seq.T.push_back(Matrix::Identity(n, n));
  for (int r = 1; r <= n; ++r) {
    Matrix Tr = seq.S[r] * Matrix::Identity(n, n) - A * seq.T.back();
    seq.T.push_back(0.5 * (Tr + Tr.transpose()));
  }
  return seq;
}

TraceResiduals trace_identities(const NewtonSeq& seq, const Matrix& A) {
  TraceResiduals out;
  const int n = seq.n;
  for (int r = 0; r <= n; ++r) {
    const double tr = seq.T[r].trace();
    out.trace_T = std::max(out.trace_T, std::abs(tr - (n - r) * seq.S[r]));
    const double next = (r + 1 <= n) ? seq.S[r + 1] : 0.0;
    const double trAT = (A * seq.T[r]).trace();
    out.trace_AT = std::max(out.trace_AT, std::abs(trAT - (r + 1) * next));
  }
  return out;
}

SymCoeffs shifted_sym(std::span<const double> alpha, double beta) {
  require_finite(alpha, "shifted_sym");
  if (!std::isfinite(beta)) {
    throw Error(ErrorKind::invalid_input, "shifted_sym: non-finite shift");
  }
  const int m = static_cast<int>(alpha.size());  // m = n - 1 boundary directions
  const SymCoeffs sa = elem_sym(alpha);
  SymCoeffs out{m, std::vector<double>(m + 1, 0.0)};
  for (int r = 0; r <= m; ++r) {
    double sum = 0.0;
    for (int j = 0; j <= r; ++j) {
      sum += binomial(m - j, r - j) * std::pow(beta, r - j) * sa[j];
    }
    out.sigma[r] = sum;
  }
  out.sigma[0] = 1.0;
  return out;
}

SymCoeffs bordered_invariants(std::span<const double> gamma,
                              std::span<const double> offdiag, double corner) {
  if (gamma.size() != offdiag.size()) {
    throw Error(ErrorKind::invalid_input,
                "bordered_invariants: gamma and offdiag lengths differ");
  }
  require_finite(gamma, "bordered_invariants");
  require_finite(offdiag, "bordered_invariants");
  const int m = static_cast<int>(gamma.size());
  const int n = m + 1;
  const SymCoeffs sg = elem_sym(gamma);
  std::vector<SymCoeffs> omitted;
  omitted.reserve(m);
  for (int i = 0; i < m; ++i) omitted.push_back(elem_sym_omitting(gamma, i));

  SymCoeffs out{n, std::vector<double>(n + 1, 0.0)};
  out.sigma[0] = 1.0;
  for (int r = 1; r <= n; ++r) {
    double S = sg[r] + sg[r - 1] * corner;
    if (r >= 2) {
      for (int i = 0; i < m; ++i) S -= omitted[i][r - 2] * offdiag[i] * offdiag[i];
    }
    out.sigma[r] = S;
  }
  return out;
}

Matrix bordered_matrix(std::span<const double> gamma,
                       std::span<const double> offdiag, double corner) {
  const Eigen::Index m = static_cast<Eigen::Index>(gamma.size());
  Matrix M = Matrix::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    M(i, i) = gamma[i];
    M(i, m) = offdiag[i];
    M(m, i) = offdiag[i];
  }
  M(m, m) = corner;
  return M;
}

double conditioning_scale(const Matrix& A) {
  const double norm_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(1.0 + norm_inf, static_cast<double>(A.rows()));
}

}  // namespace newtonflux
