#include "newtonflux/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace newtonflux {

PSurface::PSurface(AmbientSpace space, PKind kind, Vector m, double k)
    : space_(std::move(space)), kind_(kind), m_(std::move(m)), k_(k) {}

PSurface PSurface::affine_section(const AmbientSpace& space, const Vector& m, double k) {
  if (m.size() != space.embed_dim()) throw Error(ErrorKind::invalid_input, "affine_section: bad normal length");
  PSurface P(space, PKind::affine_section, m, k);
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      P.scale_ = m.norm();
      if (!(P.scale_ > 0.0)) throw Error(ErrorKind::invalid_input, "affine_section: zero normal");
      P.lambda_ = 0.0;
      break;
    }
    case SpaceKind::spherical: {
      const double q = space.inner(m, m) - k * k;
      if (!(q > 0.0)) throw Error(ErrorKind::invalid_input, "affine_section: empty or degenerate section of the sphere");
      P.scale_ = std::sqrt(q);
      P.lambda_ = k / P.scale_;
      break;
    }
    case SpaceKind::hyperbolic: {
      const double q = space.inner(m, m) + k * k;
      if (!(q > 0.0)) throw Error(ErrorKind::invalid_input, "affine_section: empty or degenerate section of hyperbolic space");
      P.scale_ = std::sqrt(q);
      P.lambda_ = -k / P.scale_;
      break;
    }
  }
  if (std::abs(P.lambda_) < 1e-15) P.lambda_ = 0.0;
  return P;
}

PSurface PSurface::euclidean_sphere(const AmbientSpace& space, const Vector& center, double radius) {
  if (space.kind() != SpaceKind::euclidean) throw Error(ErrorKind::invalid_input, "euclidean_sphere: euclidean space only");
  if (center.size() != space.embed_dim() || !(radius > 0.0)) {
    throw Error(ErrorKind::invalid_input, "euclidean_sphere: bad center or radius");
  }
  PSurface P(space, PKind::euclidean_sphere, center, radius);
  P.lambda_ = -1.0 / radius;
  return P;
}

PSurface PSurface::geodesic_sphere(const AmbientSpace& space, const Vector& center, double rho) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return euclidean_sphere(space, center, rho);
    case SpaceKind::hyperbolic: return affine_section(space, center, -std::cosh(rho));
    case SpaceKind::spherical: return affine_section(space, center, std::cos(rho));
  }
  throw Error(ErrorKind::invalid_input, "geodesic_sphere: unknown space");
}

Vector PSurface::normal(const Vector& p) const {
  if (kind_ == PKind::euclidean_sphere) return (p - m_) / (p - m_).norm();
  switch (space_.kind()) {
    case SpaceKind::euclidean: return m_ / scale_;
    default: {
      const Vector v = space_.project_tangent(p, m_);
      return v / space_.norm(v);
    }
  }
}

double PSurface::residual(const Vector& p) const {
  if (kind_ == PKind::euclidean_sphere) return std::abs((p - m_).norm() - k_);
  if (space_.kind() == SpaceKind::euclidean) return std::abs(p.dot(m_) - k_) / scale_;
  return std::abs(space_.inner(p, m_) - k_);
}

std::optional<std::pair<Vector, double>> PSurface::as_geodesic_sphere() const {
  if (kind_ == PKind::euclidean_sphere) return std::make_pair(m_, k_);
  if (space_.kind() == SpaceKind::hyperbolic && space_.on_model(m_) && -k_ > 1.0) {
    return std::make_pair(m_, std::acosh(-k_));
  }
  if (space_.kind() == SpaceKind::spherical && space_.on_model(m_) && std::abs(k_) < 1.0) {
    return std::make_pair(m_, std::acos(k_));
  }
  return std::nullopt;
}

std::string PSurface::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind_ == PKind::euclidean_sphere ? "sphere" : "section") << " m=[";
  for (Eigen::Index i = 0; i < m_.size(); ++i) os << (i ? "," : "") << m_(i);
  os << "] k=" << k_ << " lambda=" << lambda_;
  return os.str();
}

namespace {

Vector unit(const AmbientSpace& space, const Vector& v) { return v / space.norm(v); }

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

BoundaryFrame build_frame(const Configuration& config, const Vector& t) {
  if (!config.P) throw Error(ErrorKind::configuration, "build_frame: configuration has no reference hypersurface P");
  const Immersion& M = config.M;
  const AmbientSpace& space = M.space();
  const PSurface& P = *config.P;
  const int n = M.n();
  if (n < 2) throw Error(ErrorKind::configuration, "build_frame: boundary geometry needs n >= 2");

  BoundaryFrame f;
  f.t = t;
  f.u = M.boundary_chart_point(t);
  const ChartJet jet = M.jet(f.u);
  f.p = jet.p;
  if (P.residual(f.p) > 1e-8) {
    std::ostringstream os;
    os << "build_frame: boundary point is off P (residual " << P.residual(f.p) << ")";
    throw Error(ErrorKind::configuration, os.str());
  }

  Matrix rows(space.embed_dim() - 1, space.embed_dim());
  rows.topRows(n) = jet.d1.transpose();
  if (space.kind() != SpaceKind::euclidean) rows.row(n) = jet.p.transpose();
  f.N = M.orientation() * generalized_normal(space, rows);

  // Conormal: metric gradient of the radial chart coordinate.
  const Matrix g = jet.d1.transpose() * space.signature().asDiagonal() * jet.d1;
  const Vector grad = jet.d1 * g.ldlt().solve(Vector::Unit(n, 0));
  f.nu = unit(space, grad);

  f.sigma_tangents = jet.d1.rightCols(n - 1);
  const Vector xiP = P.normal(f.p);

  Matrix erows(space.embed_dim() - 1, space.embed_dim());
  erows.topRows(n - 1) = f.sigma_tangents.transpose();
  erows.row(n - 1) = xiP.transpose();
  if (space.kind() != SpaceKind::euclidean) erows.row(n) = f.p.transpose();
  f.eta = generalized_normal(space, erows);

  double outward = 0.0;
  if (config.D) {
    const ChartJet djet = config.D->jet(config.D->boundary_chart_point(t));
    if ((djet.p - f.p).norm() > 1e-8 * (1.0 + f.p.norm())) {
      throw Error(ErrorKind::configuration, "build_frame: boundary of D does not match the boundary of M");
    }
    outward = space.inner(f.eta, djet.d1.col(0));
  } else {
    outward = space.inner(f.eta, f.p - config.apex);
  }
  if (outward == 0.0) throw Error(ErrorKind::configuration, "build_frame: cannot orient eta outward from D");
  f.eta *= sign_of(outward);

  const Vector xi_solved = -space.inner(f.eta, f.N) * f.nu + space.inner(f.eta, f.nu) * f.N;
  const double align = space.inner(xi_solved, xiP);
  if (std::abs(align) < 0.5) {
    throw Error(ErrorKind::configuration, "build_frame: normal of P is not in the span of nu and N");
  }
  f.xi_sign = sign_of(align);
  f.xi = f.xi_sign * xiP;
  f.lambda = f.xi_sign * P.umbilicity();

  // Sigma inside P with normal eta.
  const int m = n - 1;
  const Matrix gs = f.sigma_tangents.transpose() * space.signature().asDiagonal() * f.sigma_tangents;
  Matrix bs(m, m);
  const Vector Jeta = space.signature().cwiseProduct(f.eta);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) bs(a, b) = jet.d2[1 + a].col(1 + b).dot(Jeta);
  }
  bs = 0.5 * (bs + bs.transpose());
  Eigen::LLT<Matrix> llt(gs);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::degenerate_immersion, "build_frame: degenerate boundary chart");
  const Matrix L = llt.matrixL();
  const Matrix Linv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(m, m));
  Matrix As = Linv * bs * Linv.transpose();
  As = 0.5 * (As + As.transpose());
  const SymmetricEigen eig = jacobi_eigen(As);
  f.tau = eig.values;
  f.e = f.sigma_tangents * Linv.transpose() * eig.vectors;
  return f;
}

void align_frames(std::vector<BoundaryFrame>& frames, double tie_tolerance) {
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const BoundaryFrame& prev = frames[k - 1];
    BoundaryFrame& cur = frames[k];
    const int m = static_cast<int>(cur.tau.size());
    int start = 0;
    while (start < m) {
      int end = start + 1;
      while (end < m && std::abs(cur.tau(end) - cur.tau(start)) <= tie_tolerance * (1.0 + std::abs(cur.tau(start)))) ++end;
      if (end - start > 1) {
        std::vector<int> pool;
        for (int i = start; i < end; ++i) pool.push_back(i);
        Matrix reordered = cur.e.middleCols(start, end - start);
        for (int slot = start; slot < end; ++slot) {
          auto best = pool.begin();
          double best_overlap = -1.0;
          for (auto it = pool.begin(); it != pool.end(); ++it) {
            const double o = std::abs(cur.e.col(*it).dot(prev.e.col(slot)));
            if (o > best_overlap) {
              best_overlap = o;
              best = it;
            }
          }
          reordered.col(slot - start) = cur.e.col(*best);
          pool.erase(best);
        }
        cur.e.middleCols(start, end - start) = reordered;
      }
      start = end;
    }
    for (int i = 0; i < m; ++i) {
      if (cur.e.col(i).dot(prev.e.col(i)) < 0.0) cur.e.col(i) *= -1.0;
    }
  }
}

std::vector<BoundaryFrame> boundary_frames(const Configuration& config, int order) {
  const Immersion& M = config.M;
  const std::vector<Vector> nodes = rule_nodes(M.boundary_box(), TensorRule::uniform(M.n() - 1, order));
  std::vector<BoundaryFrame> frames;
  frames.reserve(nodes.size());
  for (const Vector& t : nodes) frames.push_back(build_frame(config, t));
  align_frames(frames);
  return frames;
}

void validate_configuration(const Configuration& config) {
  if (!config.P) throw Error(ErrorKind::configuration, "configuration has no reference hypersurface P");
  const Immersion& M = config.M;
  const PSurface& P = *config.P;
  for (const Vector& t : rule_nodes(M.boundary_box(), TensorRule::uniform(M.n() - 1, 4))) {
    const double res = P.residual(M.position(M.boundary_chart_point(t)));
    if (res > 1e-8) {
      std::ostringstream os;
      os << "configuration: boundary of M is off P (residual " << res << ")";
      throw Error(ErrorKind::configuration, os.str());
    }
  }
  ParamBox interior = M.domain();
  interior.hi(0) = interior.lo(0) + 0.9 * (interior.hi(0) - interior.lo(0));
  double max_off = 0.0;
  for (const Vector& u : rule_nodes(interior, TensorRule::uniform(M.n(), 3))) {
    max_off = std::max(max_off, P.residual(M.position(u)));
  }
  if (max_off < 1e-9) {
    throw Error(ErrorKind::configuration,
                "configuration is degenerate: M lies inside P, so the boundary has no transversal direction");
  }
}

FrameResiduals frame_residuals(const AmbientSpace& space, const BoundaryFrame& f) {
  FrameResiduals r;
  const double xn = space.inner(f.xi, f.nu);
  const double xN = space.inner(f.xi, f.N);
  r.nueta = std::abs(space.inner(f.eta, f.nu) - xN) + std::abs(space.inner(f.eta, f.N) + xn);
  r.xi_span = std::abs(xn * xn + xN * xN - 1.0);
  for (const Vector* v : {&f.nu, &f.N, &f.xi, &f.eta}) {
    r.unit = std::max(r.unit, std::abs(space.inner(*v, *v) - 1.0));
  }
  double o = std::max(std::abs(space.inner(f.nu, f.N)), std::abs(space.inner(f.eta, f.xi)));
  for (Eigen::Index a = 0; a < f.sigma_tangents.cols(); ++a) {
    const Vector s = f.sigma_tangents.col(a);
    const double len = space.norm(s);
    o = std::max(o, std::abs(space.inner(f.nu, s)) / len);
    o = std::max(o, std::abs(space.inner(f.eta, s)) / len);
  }
  r.orthogonality = o;
  return r;
}

IdentityValue identity_umbilic(const AmbientSpace& space, const BoundaryFrame& f,
                               const CurvatureData& curv, int r) {
  const int n = space.n();
  if (r < 1 || r > n - 1) throw Error(ErrorKind::invalid_input, "identity_umbilic: requires 1 <= r <= n-1");
  IdentityValue v;
  v.lhs = curv.T_form(space, r, f.nu, f.nu);
  const SymCoeffs s = elem_sym(std::span<const double>(f.tau.data(), static_cast<std::size_t>(f.tau.size())));
  const double xN = space.inner(f.xi, f.N);
  const double xn = space.inner(f.xi, f.nu);
  double rhs = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    rhs += sign * binomial(n - 1 - j, r - j) * std::pow(f.lambda * xN, r - j) * std::pow(xn, j) * s[j];
  }
  v.rhs = rhs;
  v.residual = std::abs(v.lhs - v.rhs);
  return v;
}

namespace {

struct BorderedData {
  std::vector<double> gamma_measured;
  std::vector<double> offdiag;
  double corner = 0.0;
};

BorderedData bordered_data(const AmbientSpace& space, const BoundaryFrame& f, const CurvatureData& curv) {
  BorderedData d;
  const Eigen::Index m = f.e.cols();
  for (Eigen::Index i = 0; i < m; ++i) {
    d.gamma_measured.push_back(curv.A_form(space, f.e.col(i), f.e.col(i)));
    d.offdiag.push_back(curv.A_form(space, f.nu, f.e.col(i)));
  }
  d.corner = curv.A_form(space, f.nu, f.nu);
  return d;
}

}  // namespace

IdentityValue identity_Sr(const AmbientSpace& space, const BoundaryFrame& f,
                          const CurvatureData& curv, int r) {
  const int n = space.n();
  if (r < 1 || r > n) throw Error(ErrorKind::invalid_input, "identity_Sr: requires 1 <= r <= n");
  const BorderedData d = bordered_data(space, f, curv);
  const double xN = space.inner(f.xi, f.N);
  const double xn = space.inner(f.xi, f.nu);
  std::vector<double> gamma;
  for (Eigen::Index i = 0; i < f.tau.size(); ++i) gamma.push_back(-f.tau(i) * xn + f.lambda * xN);
  const SymCoeffs S = bordered_invariants(gamma, d.offdiag, d.corner);
  IdentityValue v;
  v.lhs = curv.S(r);
  v.rhs = S[r];
  v.residual = std::abs(v.lhs - v.rhs);
  return v;
}

double formaA2_residual(const AmbientSpace& space, const BoundaryFrame& f, const CurvatureData& curv) {
  const Eigen::Index m = f.e.cols();
  const double xN = space.inner(f.xi, f.N);
  const double xn = space.inner(f.xi, f.nu);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double v = curv.A_form(space, f.e.col(i), f.e.col(j));
      if (i == j) v += f.tau(i) * xn - f.lambda * xN;
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

double bordered_residual(const AmbientSpace& space, const BoundaryFrame& f, const CurvatureData& curv) {
  const BorderedData d = bordered_data(space, f, curv);
  const SymCoeffs S = bordered_invariants(d.gamma_measured, d.offdiag, d.corner);
  double worst = 0.0;
  for (int r = 1; r <= space.n(); ++r) worst = std::max(worst, std::abs(S[r] - curv.S(r)));
  return worst;
}

TransversalityReport transversality_report(const Configuration& config, int r, int boundary_order,
                                           int interior_order, double threshold) {
  const Immersion& M = config.M;
  const AmbientSpace& space = M.space();
  TransversalityReport rep;
  rep.threshold = threshold;
  rep.min_abs_xi_nu = std::numeric_limits<double>::infinity();
  for (const BoundaryFrame& f : boundary_frames(config, boundary_order)) {
    rep.min_abs_xi_nu = std::min(rep.min_abs_xi_nu, std::abs(space.inner(f.xi, f.nu)));
    ++rep.boundary_samples;
  }
  rep.min_T_eigenvalue = std::numeric_limits<double>::infinity();
  rep.min_S2 = std::numeric_limits<double>::infinity();
  rep.min_abs_Sn = std::numeric_limits<double>::infinity();
  const int n = M.n();
  const int rr = std::clamp(r, 0, n);
  for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(n, interior_order))) {
    const CurvatureData cd = curvature_at(M, u);
    const SymmetricEigen eig = jacobi_eigen(cd.newton.T[static_cast<std::size_t>(rr)]);
    rep.min_T_eigenvalue = std::min(rep.min_T_eigenvalue, eig.values.minCoeff());
    rep.min_S2 = std::min(rep.min_S2, cd.S(2));
    rep.min_abs_Sn = std::min(rep.min_abs_Sn, std::abs(cd.S(n)));
    ++rep.interior_samples;
  }
  rep.transverse = rep.min_abs_xi_nu > threshold;
  return rep;
}

EllipticScan elliptic_point_scan(const Immersion& imm, int resolution) {
  if (resolution < 1) throw Error(ErrorKind::invalid_input, "elliptic_point_scan: resolution must be >= 1");
  const ParamBox& box = imm.domain();
  const int n = box.dim();
  EllipticScan scan;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  long total = 1;
  for (int k = 0; k < n; ++k) total *= resolution;
  for (long c = 0; c < total; ++c) {
    Vector u(n);
    for (int k = 0; k < n; ++k) {
      u(k) = box.lo(k) + (idx[k] + 0.5) / resolution * (box.hi(k) - box.lo(k));
    }
    ++scan.points_scanned;
    const CurvatureData cd = curvature_at(imm, u);
    const double kmin = cd.kappa.minCoeff();
    const double kmax = cd.kappa.maxCoeff();
    if (kmin > 0.0 || kmax < 0.0) {
      scan.found = true;
      scan.u = u;
      scan.margin = cd.kappa.cwiseAbs().minCoeff();
      return scan;
    }
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < resolution) break;
      idx[k] = 0;
    }
  }
  return scan;
}

}  // namespace newtonflux
