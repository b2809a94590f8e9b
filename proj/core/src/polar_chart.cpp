#include "polar_chart.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace newtonflux::detail {

namespace {

enum class Factor { one, sine, cosine };

struct FactorValue {
  double f, df, ddf;
};

FactorValue evaluate(Factor kind, double x) {
  switch (kind) {
    case Factor::one: return {1.0, 0.0, 0.0};
    case Factor::sine: return {std::sin(x), std::cos(x), -std::sin(x)};
    case Factor::cosine: return {std::cos(x), -std::sin(x), -std::cos(x)};
  }
  return {1.0, 0.0, 0.0};
}

}  // namespace

Direction hyperspherical(const Vector& alpha, int n) {
  const int m = n - 1;
  if (alpha.size() != m) throw Error(ErrorKind::invalid_input, "hyperspherical: expected n-1 angles");
  Direction out;
  out.w.resize(n);
  out.d1 = Matrix::Zero(n, m);
  out.d2.assign(m, Matrix::Zero(n, m));
  for (int k = 0; k < n; ++k) {
    std::vector<FactorValue> fv(m);
    for (int j = 0; j < m; ++j) {
      Factor kind = Factor::one;
      if (j < k) kind = Factor::sine;
      else if (j == k && k <= n - 2) kind = Factor::cosine;
      fv[j] = evaluate(kind, alpha(j));
    }
    auto product = [&](int skip1, int skip2) {
      double p = 1.0;
      for (int j = 0; j < m; ++j) {
        if (j != skip1 && j != skip2) p *= fv[j].f;
      }
      return p;
    };
    out.w(k) = product(-1, -1);
    for (int i = 0; i < m; ++i) {
      out.d1(k, i) = fv[i].df * product(i, -1);
      out.d2[i](k, i) = fv[i].ddf * product(i, -1);
      for (int l = i + 1; l < m; ++l) {
        const double v = fv[i].df * fv[l].df * product(i, l);
        out.d2[i](k, l) = v;
        out.d2[l](k, i) = v;
      }
    }
  }
  return out;
}

ParamBox polar_box(int n, double s_lo, double s_hi) {
  ParamBox box{Vector(n), Vector(n)};
  box.lo(0) = s_lo;
  box.hi(0) = s_hi;
  for (int j = 1; j < n; ++j) {
    const bool azimuth = (j == n - 1);
    box.lo(j) = azimuth ? 0.0 : kChartMargin;
    box.hi(j) = azimuth ? 2.0 * std::numbers::pi : std::numbers::pi - kChartMargin;
  }
  return box;
}

RevolutionFrame standard_frame(const AmbientSpace& space) {
  const int n = space.n();
  const int m = space.embed_dim();
  const int offset = space.kind() == SpaceKind::euclidean ? 0 : 1;
  RevolutionFrame f;
  f.C = Vector::Zero(m);
  f.A = offset ? space.axis(0) : Vector(Vector::Zero(m));
  f.Q = Matrix::Zero(m, n);
  for (int k = 0; k < n; ++k) f.Q(offset + k, k) = 1.0;
  f.Z = space.axis(m - 1);
  return f;
}

JetFunction revolution_jet(RevolutionFrame frame, ProfileFunction profile) {
  return [frame = std::move(frame), profile = std::move(profile)](const Vector& u) {
    const int n = static_cast<int>(u.size());
    const Profile pr = profile(u(0));
    const Direction dir = hyperspherical(u.tail(n - 1), n);
    const Vector w = frame.Q * dir.w;
    const Matrix dw = frame.Q * dir.d1;

    ChartJet jet;
    jet.p = frame.C + pr.a * frame.A + pr.r * w + pr.z * frame.Z;
    const Eigen::Index m = jet.p.size();
    jet.d1.resize(m, n);
    jet.d2.assign(n, Matrix::Zero(m, n));
    jet.d1.col(0) = pr.da * frame.A + pr.dr * w + pr.dz * frame.Z;
    jet.d2[0].col(0) = pr.dda * frame.A + pr.ddr * w + pr.ddz * frame.Z;
    for (int j = 0; j < n - 1; ++j) {
      jet.d1.col(1 + j) = pr.r * dw.col(j);
      jet.d2[0].col(1 + j) = pr.dr * dw.col(j);
      jet.d2[1 + j].col(0) = pr.dr * dw.col(j);
      const Matrix ddw = frame.Q * dir.d2[j];
      for (int l = 0; l < n - 1; ++l) jet.d2[1 + j].col(1 + l) = pr.r * ddw.col(l);
    }
    return jet;
  };
}

JetFunction add_height(JetFunction base, HeightFunction height, double amplitude, Vector direction) {
  return [base = std::move(base), height = std::move(height), amplitude,
          direction = std::move(direction)](const Vector& u) {
    ChartJet jet = base(u);
    if (amplitude == 0.0) return jet;
    const HeightJet h = height(u);
    const int n = static_cast<int>(u.size());
    jet.p += amplitude * h.v * direction;
    jet.d1 += amplitude * direction * h.d.transpose();
    for (int i = 0; i < n; ++i) jet.d2[i] += amplitude * direction * h.dd.row(i);
    return jet;
  };
}

JetFunction project_to_model(const AmbientSpace& space, JetFunction base) {
  if (space.kind() == SpaceKind::euclidean) return base;
  return [space, base = std::move(base)](const Vector& u) {
    const ChartJet F = base(u);
    const int n = static_cast<int>(u.size());
    const double sgn = space.kind() == SpaceKind::spherical ? 1.0 : -1.0;
    const double q = sgn * space.inner(F.p, F.p);
    if (!(q > 0.0)) throw Error(ErrorKind::degenerate_immersion, "project_to_model: point left the model cone");
    Vector qi(n);
    Matrix qij(n, n);
    for (int i = 0; i < n; ++i) {
      qi(i) = 2.0 * sgn * space.inner(F.p, F.d1.col(i));
      for (int j = 0; j < n; ++j) {
        qij(i, j) = 2.0 * sgn * (space.inner(F.d1.col(j), F.d1.col(i)) + space.inner(F.p, F.d2[i].col(j)));
      }
    }
    const double q12 = 1.0 / std::sqrt(q);
    const double q32 = q12 / q;
    const double q52 = q32 / q;
    ChartJet G;
    G.p = F.p * q12;
    G.d1.resize(F.d1.rows(), n);
    G.d2.assign(n, Matrix(F.d1.rows(), n));
    for (int i = 0; i < n; ++i) G.d1.col(i) = F.d1.col(i) * q12 - 0.5 * F.p * q32 * qi(i);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        G.d2[i].col(j) = F.d2[i].col(j) * q12 - 0.5 * F.d1.col(i) * q32 * qi(j) -
                         0.5 * F.d1.col(j) * q32 * qi(i) - 0.5 * F.p * q32 * qij(i, j) +
                         0.75 * F.p * q52 * qi(i) * qi(j);
      }
    }
    return G;
  };
}

HeightFunction bump_height(int n, double s_max, Vector coeffs) {
  return [n, s_max, coeffs = std::move(coeffs)](const Vector& u) {
    const double s = u(0);
    const Direction dir = hyperspherical(u.tail(n - 1), n);
    const double S2 = s_max * s_max;
    const double w = 1.0 - s * s / S2;
    const double dw = -2.0 * s / S2;
    const double ddw = -2.0 / S2;
    const double cw = coeffs.dot(dir.w);
    const double v = 1.0 + s * cw;
    const double vs = cw;
    HeightJet h;
    h.v = w * v;
    h.d = Vector::Zero(n);
    h.dd = Matrix::Zero(n, n);
    h.d(0) = dw * v + w * vs;
    h.dd(0, 0) = ddw * v + 2.0 * dw * vs;
    for (int j = 0; j < n - 1; ++j) {
      const double cdj = coeffs.dot(dir.d1.col(j));
      h.d(1 + j) = w * s * cdj;
      h.dd(0, 1 + j) = dw * s * cdj + w * cdj;
      h.dd(1 + j, 0) = h.dd(0, 1 + j);
      const Vector cdd = dir.d2[j].transpose() * coeffs;
      for (int l = 0; l < n - 1; ++l) h.dd(1 + j, 1 + l) = w * s * cdd(l);
    }
    return h;
  };
}

Vector bump_coefficients(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector c(n);
  for (int k = 0; k < n; ++k) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c(k) = unit - 0.5;
  }
  return c;
}

HeightFunction radial_height(std::function<Profile(double)> h) {
  return [h = std::move(h)](const Vector& u) {
    const int n = static_cast<int>(u.size());
    const Profile p = h(u(0));
    HeightJet out;
    out.v = p.z;
    out.d = Vector::Zero(n);
    out.dd = Matrix::Zero(n, n);
    out.d(0) = p.dz;
    out.dd(0, 0) = p.ddz;
    return out;
  };
}

HeightFunction saddle_height(int n) {
  return [n](const Vector& u) {
    const double s = u(0);
    const Direction dir = hyperspherical(u.tail(n - 1), n);
    const double w0 = dir.w(0), w1 = dir.w(1);
    const double q = w0 * w0 - w1 * w1;
    HeightJet h;
    h.v = s * s * q;
    h.d = Vector::Zero(n);
    h.dd = Matrix::Zero(n, n);
    h.d(0) = 2.0 * s * q;
    h.dd(0, 0) = 2.0 * q;
    for (int j = 0; j < n - 1; ++j) {
      const double qj = 2.0 * (w0 * dir.d1(0, j) - w1 * dir.d1(1, j));
      h.d(1 + j) = s * s * qj;
      h.dd(0, 1 + j) = 2.0 * s * qj;
      h.dd(1 + j, 0) = h.dd(0, 1 + j);
      for (int l = 0; l < n - 1; ++l) {
        const double qjl = 2.0 * (dir.d1(0, l) * dir.d1(0, j) + w0 * dir.d2[j](0, l) -
                                  dir.d1(1, l) * dir.d1(1, j) - w1 * dir.d2[j](1, l));
        h.dd(1 + j, 1 + l) = s * s * qjl;
      }
    }
    return h;
  };
}

}  // namespace newtonflux::detail
