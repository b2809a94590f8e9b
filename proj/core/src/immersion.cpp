#include "newtonflux/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace newtonflux {

bool ParamBox::contains(const Vector& u, double margin) const {
  if (u.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) < lo(i) + margin || u(i) > hi(i) - margin) return false;
  }
  return true;
}

Immersion::Immersion(AmbientSpace space, ParamBox domain, JetFunction jet, double orientation)
    : space_(std::move(space)),
      domain_(std::move(domain)),
      mode_(DerivativeMode::analytic),
      jet_(std::move(jet)),
      orientation_(orientation < 0.0 ? -1.0 : 1.0) {
  if (domain_.dim() != space_.n() || domain_.hi.size() != domain_.lo.size()) {
    throw Error(ErrorKind::invalid_input, "Immersion: parameter box dimension must equal n");
  }
  position_ = [f = jet_](const Vector& u) { return f(u).p; };
}

Immersion Immersion::from_position(AmbientSpace space, ParamBox domain, PositionFunction position,
                                   double fd_step, double orientation) {
  JetFunction placeholder = [](const Vector&) -> ChartJet { return {}; };
  Immersion imm(std::move(space), std::move(domain), placeholder, orientation);
  imm.mode_ = DerivativeMode::finite_difference;
  imm.position_ = std::move(position);
  imm.fd_step_ = fd_step;
  imm.jet_ = nullptr;
  return imm;
}

Immersion Immersion::reoriented(double sign) const {
  Immersion copy = *this;
  copy.orientation_ = sign < 0.0 ? -1.0 : 1.0;
  return copy;
}

Vector Immersion::position(const Vector& u) const { return position_(u); }

ChartJet Immersion::jet(const Vector& u) const {
  if (mode_ == DerivativeMode::finite_difference) return fd_jet(u, fd_step_);
  return jet_(u);
}

ChartJet Immersion::fd_jet(const Vector& u, double h) const {
  const int n = domain_.dim();
  ChartJet jet;
  jet.p = position_(u);
  const Eigen::Index m = jet.p.size();
  jet.d1.resize(m, n);
  jet.d2.assign(n, Matrix(m, n));
  std::vector<Vector> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    Vector up = u, um = u;
    up(i) += h;
    um(i) -= h;
    plus[i] = position_(up);
    minus[i] = position_(um);
    jet.d1.col(i) = (plus[i] - minus[i]) / (2.0 * h);
    jet.d2[i].col(i) = (plus[i] - 2.0 * jet.p + minus[i]) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector pp = u, pm = u, mp = u, mm = u;
      pp(i) += h; pp(j) += h;
      pm(i) += h; pm(j) -= h;
      mp(i) -= h; mp(j) += h;
      mm(i) -= h; mm(j) -= h;
      const Vector mixed =
          (position_(pp) - position_(pm) - position_(mp) + position_(mm)) / (4.0 * h * h);
      jet.d2[i].col(j) = mixed;
      jet.d2[j].col(i) = mixed;
    }
  }
  return jet;
}

ParamBox Immersion::boundary_box() const {
  const int n = domain_.dim();
  if (n < 2) throw Error(ErrorKind::invalid_input, "boundary_box: requires n >= 2");
  return ParamBox{domain_.lo.tail(n - 1), domain_.hi.tail(n - 1)};
}

Vector Immersion::boundary_chart_point(const Vector& t) const {
  const int n = domain_.dim();
  Vector u(n);
  u(0) = domain_.hi(0);
  u.tail(n - 1) = t;
  return u;
}

Vector generalized_normal(const AmbientSpace& space, const Matrix& rows) {
  const Eigen::Index m = rows.cols();
  if (rows.rows() != m - 1) {
    throw Error(ErrorKind::invalid_input, "generalized_normal: expected (m-1) x m rows");
  }
  Vector c(m);
  Matrix minor(m - 1, m - 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k > 0) minor.leftCols(k) = rows.leftCols(k);
    if (k < m - 1) minor.rightCols(m - 1 - k) = rows.rightCols(m - 1 - k);
    const double det = (m == 1) ? 1.0 : minor.determinant();
    c(k) = (k % 2 == 0) ? det : -det;
  }
  double scale = 1.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) scale *= rows.row(i).norm();
  if (!(c.norm() > 1e-12 * scale) || !c.allFinite()) {
    throw Error(ErrorKind::degenerate_immersion, "generalized_normal: tangent vectors are dependent");
  }
  Vector N = space.signature().cwiseProduct(c);
  const double q = space.inner(N, N);
  if (!(q > 0.0)) {
    throw Error(ErrorKind::degenerate_immersion, "generalized_normal: normal is not spacelike");
  }
  return N / std::sqrt(q);
}

namespace {

Vector normal_from_jet(const AmbientSpace& space, const ChartJet& jet, double orientation) {
  const int n = space.n();
  Matrix rows(space.embed_dim() - 1, space.embed_dim());
  rows.topRows(n) = jet.d1.transpose();
  if (space.kind() != SpaceKind::euclidean) rows.row(n) = jet.p.transpose();
  return orientation * generalized_normal(space, rows);
}

Matrix gram(const AmbientSpace& space, const Matrix& X) {
  return X.transpose() * space.signature().asDiagonal() * X;
}

}  // namespace

SurfaceFrame evaluate_frame(const Immersion& imm, const Vector& u) {
  const ChartJet jet = imm.jet(u);
  SurfaceFrame frame;
  frame.u = u;
  frame.p = jet.p;
  frame.tangents = jet.d1;
  frame.N = normal_from_jet(imm.space(), jet, imm.orientation());
  return frame;
}

double min_singular_value(const Immersion& imm, const Vector& u) {
  const ChartJet jet = imm.jet(u);
  Eigen::JacobiSVD<Matrix> svd(jet.d1);
  return svd.singularValues().minCoeff();
}

double CurvatureData::S(int r) const {
  return (r < 0 || r > newton.n) ? 0.0 : newton.S[static_cast<std::size_t>(r)];
}

double CurvatureData::H(int r) const {
  return (r < 0 || r > newton.n) ? 0.0 : newton.H[static_cast<std::size_t>(r)];
}

double CurvatureData::sqrt_det_g() const {
  return L.diagonal().prod();
}

Matrix CurvatureData::T_chart(int r) const {
  if (r < 0 || r > newton.n) throw Error(ErrorKind::invalid_input, "T_chart: r out of range");
  const Matrix Linv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(L.rows(), L.cols()));
  return Linv.transpose() * newton.T[static_cast<std::size_t>(r)] * Linv;
}

Vector CurvatureData::frame_coords(const AmbientSpace& space, const Vector& X) const {
  return frame.transpose() * space.signature().cwiseProduct(X);
}

double CurvatureData::T_form(const AmbientSpace& space, int r, const Vector& X, const Vector& Y) const {
  if (r < 0 || r > newton.n) throw Error(ErrorKind::invalid_input, "T_form: r out of range");
  return frame_coords(space, Y).dot(newton.T[static_cast<std::size_t>(r)] * frame_coords(space, X));
}

double CurvatureData::A_form(const AmbientSpace& space, const Vector& X, const Vector& Y) const {
  return frame_coords(space, Y).dot(A_frame * frame_coords(space, X));
}

CurvatureData curvature_from_jet(const AmbientSpace& space, const ChartJet& jet,
                                 double orientation, const Vector& u) {
  const int n = space.n();
  CurvatureData cd;
  cd.u = u;
  cd.p = jet.p;
  cd.tangents = jet.d1;
  cd.N = normal_from_jet(space, jet, orientation);
  cd.g = gram(space, jet.d1);
  cd.b.resize(n, n);
  const Vector JN = space.signature().cwiseProduct(cd.N);
  for (int i = 0; i < n; ++i) cd.b.row(i) = (jet.d2[i].transpose() * JN).transpose();
  cd.b = 0.5 * (cd.b + cd.b.transpose());

  Eigen::LLT<Matrix> llt(cd.g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::degenerate_immersion, "curvature_at: metric is not positive definite");
  }
  cd.L = llt.matrixL();
  const Matrix Linv = cd.L.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  cd.frame = jet.d1 * Linv.transpose();
  cd.A_frame = Linv * cd.b * Linv.transpose();
  cd.A_frame = 0.5 * (cd.A_frame + cd.A_frame.transpose());
  cd.newton = newton_transforms(cd.A_frame);
  cd.kappa = cd.newton.kappa;
  return cd;
}

CurvatureData curvature_at(const Immersion& imm, const Vector& u) {
  return curvature_from_jet(imm.space(), imm.jet(u), imm.orientation(), u);
}

double scalar_curvature(const Immersion& imm, const Vector& u) {
  const int n = imm.n();
  const CurvatureData cd = curvature_at(imm, u);
  return n * (n - 1) * (imm.space().curvature() + cd.H(2));
}

DivergenceResult newton_field_divergence(const Immersion& imm, const Vector& u, int r, double h) {
  const int n = imm.n();
  if (r < 0 || r > n) throw Error(ErrorKind::invalid_input, "newton_field_divergence: r out of range");
  if (!imm.domain().contains(u, h)) {
    std::ostringstream os;
    os << "newton_field_divergence: point lies within the finite-difference margin " << h
       << " of the parameter box";
    throw Error(ErrorKind::out_of_domain, os.str());
  }
  DivergenceResult out;
  out.covector = Vector::Zero(n);
  if (r == 0) return out;

  const CurvatureData center = curvature_at(imm, u);
  const Matrix T0 = center.T_chart(r);
  const Matrix ginv = center.g.inverse();

  // Axis-wise samples of sqrt(g) T^{ka} and g_ij.
  Vector flux_div = Vector::Zero(n);
  std::vector<Matrix> dg(n);
  for (int a = 0; a < n; ++a) {
    Vector up = u, um = u;
    up(a) += h;
    um(a) -= h;
    const CurvatureData cp = curvature_at(imm, up);
    const CurvatureData cm = curvature_at(imm, um);
    const Vector wp = cp.sqrt_det_g() * cp.T_chart(r).col(a);
    const Vector wm = cm.sqrt_det_g() * cm.T_chart(r).col(a);
    flux_div += (wp - wm) / (2.0 * h);
    dg[a] = (cp.g - cm.g) / (2.0 * h);
  }
  Vector div = flux_div / center.sqrt_det_g();

  // Gamma^k_{ac} T^{ca}
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        double gamma = 0.0;
        for (int l = 0; l < n; ++l) {
          gamma += 0.5 * ginv(k, l) * (dg[a](l, c) + dg[c](l, a) - dg[l](a, c));
        }
        acc += gamma * T0(c, a);
      }
    }
    div(k) += acc;
  }
  out.covector = center.g * div;
  out.norm = std::sqrt(std::max(0.0, div.dot(center.g * div)));
  return out;
}

RichardsonSummary divergence_richardson(const Immersion& imm, const std::vector<Vector>& points,
                                        int r, double h, double floor) {
  RichardsonSummary s;
  double sum_h = 0.0;
  double sum_half = 0.0;
  for (const Vector& u : points) {
    const double a = newton_field_divergence(imm, u, r, h).norm;
    const double b = newton_field_divergence(imm, u, r, 0.5 * h).norm;
    ++s.points_total;
    s.max_norm_h = std::max(s.max_norm_h, a);
    s.max_norm_half = std::max(s.max_norm_half, b);
    if (a > floor) {
      sum_h += a;
      sum_half += b;
      ++s.points_used;
    }
  }
  s.slope = (s.points_used > 0 && sum_half > 0.0) ? std::log2(sum_h / sum_half) : 0.0;
  return s;
}

}  // namespace newtonflux
