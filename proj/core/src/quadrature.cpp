#include "newtonflux/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <numbers>
#include <sstream>

namespace newtonflux {

namespace {

// Returns (P_order(x), P_order'(x)).
std::pair<double, double> legendre(int order, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= order; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, order * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre GaussLegendre::make(int order) {
  if (order < 1) throw Error(ErrorKind::invalid_input, "GaussLegendre: order must be >= 1");
  GaussLegendre rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

TensorRule TensorRule::uniform(int dim, int order) {
  return with_orders(std::vector<int>(static_cast<std::size_t>(dim), order));
}

TensorRule TensorRule::with_orders(const std::vector<int>& orders) {
  TensorRule rule;
  for (int o : orders) rule.axes.push_back(GaussLegendre::make(o));
  return rule;
}

std::vector<int> TensorRule::orders() const {
  std::vector<int> out;
  for (const auto& a : axes) out.push_back(a.order);
  return out;
}

std::size_t TensorRule::size() const {
  std::size_t total = 1;
  for (const auto& a : axes) total *= static_cast<std::size_t>(a.order);
  return total;
}

int default_order(int n) noexcept { return n <= 2 ? 32 : 16; }

const char* to_string(RegionKind kind) noexcept {
  switch (kind) {
    case RegionKind::surface_M: return "surface_M";
    case RegionKind::boundary_dM: return "boundary_dM";
    case RegionKind::disk_D: return "disk_D";
    case RegionKind::solid_Omega: return "solid_Omega";
  }
  return "unknown";
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

namespace {

struct NodeSet {
  std::vector<Vector> nodes;
  std::vector<double> weights;
};

NodeSet tensor_nodes(const ParamBox& box, const TensorRule& rule) {
  const int d = rule.dim();
  if (box.dim() != d) throw Error(ErrorKind::invalid_input, "integrate: rule and box dimensions differ");
  NodeSet set;
  const std::size_t total = rule.size();
  set.nodes.reserve(total);
  set.weights.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t count = 0; count < total; ++count) {
    Vector u(d);
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const GaussLegendre& gl = rule.axes[k];
      const double half = 0.5 * (box.hi(k) - box.lo(k));
      const double mid = 0.5 * (box.hi(k) + box.lo(k));
      u(k) = mid + half * gl.nodes[idx[k]];
      w *= half * gl.weights[idx[k]];
    }
    set.nodes.push_back(std::move(u));
    set.weights.push_back(w);
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < rule.axes[k].order) break;
      idx[k] = 0;
    }
  }
  return set;
}

std::string describe_node(const Vector& u) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
  os << ')';
  return os.str();
}

}  // namespace

std::vector<Vector> rule_nodes(const ParamBox& box, const TensorRule& rule) {
  return tensor_nodes(box, rule).nodes;
}

double integrate(const RegionSpec& region, const Integrand& f, const TensorRule& rule) {
  const NodeSet set = tensor_nodes(region.box, rule);
  std::vector<double> terms(set.nodes.size());
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const RegionSample s = region.sample(set.nodes[i]);
    const double v = f(set.nodes[i], s.x);
    const double term = set.weights[i] * v * s.measure;
    if (!std::isfinite(term)) {
      throw Error(ErrorKind::integration, std::string("integrate: non-finite integrand on ") +
                                              to_string(region.kind) + " at node " +
                                              describe_node(set.nodes[i]));
    }
    terms[i] = term;
  }
  return pairwise_sum(terms);
}

double integrate(const RegionSpec& region, const Integrand& f, int order) {
  return integrate(region, f, TensorRule::uniform(region.box.dim(), order));
}

RegionSpec surface_region(const Immersion& imm, RegionKind kind) {
  RegionSpec spec;
  spec.kind = kind;
  spec.box = imm.domain();
  spec.sample = [imm](const Vector& u) {
    const ChartJet jet = imm.jet(u);
    const Matrix g = jet.d1.transpose() * imm.space().signature().asDiagonal() * jet.d1;
    return RegionSample{jet.p, std::sqrt(std::max(0.0, g.determinant()))};
  };
  return spec;
}

RegionSpec boundary_region(const Immersion& imm) {
  RegionSpec spec;
  spec.kind = RegionKind::boundary_dM;
  spec.box = imm.boundary_box();
  spec.sample = [imm](const Vector& t) {
    const ChartJet jet = imm.jet(imm.boundary_chart_point(t));
    const Matrix sig = jet.d1.rightCols(imm.n() - 1);
    const Matrix g = sig.transpose() * imm.space().signature().asDiagonal() * sig;
    return RegionSample{jet.p, std::sqrt(std::max(0.0, g.determinant()))};
  };
  return spec;
}

RegionSpec cone_region(const Immersion& imm, const Vector& apex) {
  const int n = imm.n();
  const AmbientSpace& space = imm.space();
  if (apex.size() != space.embed_dim()) throw Error(ErrorKind::invalid_input, "cone_region: bad apex");
  RegionSpec spec;
  spec.kind = RegionKind::solid_Omega;
  spec.box.lo.resize(n + 1);
  spec.box.hi.resize(n + 1);
  spec.box.lo(0) = 0.0;
  spec.box.hi(0) = 1.0;
  spec.box.lo.tail(n) = imm.domain().lo;
  spec.box.hi.tail(n) = imm.domain().hi;
  spec.sample = [imm, apex, n](const Vector& v) {
    const AmbientSpace& sp = imm.space();
    const double tau = v(0);
    const ChartJet jet = imm.jet(v.tail(n));
    const Vector radial = jet.p - apex;
    const Vector y = apex + tau * radial;
    const double tau_n = std::pow(tau, n);
    if (sp.kind() == SpaceKind::euclidean) {
      Matrix M(sp.embed_dim(), n + 1);
      M.col(0) = radial;
      M.rightCols(n) = jet.d1;
      return RegionSample{y, tau_n * M.determinant()};
    }
    const double sgn = sp.kind() == SpaceKind::spherical ? 1.0 : -1.0;
    const double q = sgn * sp.inner(y, y);
    if (!(q > 0.0)) throw Error(ErrorKind::unsupported_region, "cone_region: cone passes through the model's singular set");
    Matrix M(sp.embed_dim(), n + 2);
    M.col(0) = y;
    M.col(1) = radial;
    M.rightCols(n) = jet.d1;
    return RegionSample{y / std::sqrt(q), std::pow(q, -0.5 * (n + 2)) * tau_n * M.determinant()};
  };
  return spec;
}

SolidTerms solid_volume_terms(const RegionSpec& omega, const std::function<double(const Vector&)>& phi,
                              const TensorRule& rule) {
  if (omega.kind != RegionKind::solid_Omega) {
    throw Error(ErrorKind::invalid_input, "solid_volume_terms: region is not a solid");
  }
  const NodeSet set = tensor_nodes(omega.box, rule);
  std::vector<double> vol(set.nodes.size()), phiv(set.nodes.size());
  int sign = 0;
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const RegionSample s = omega.sample(set.nodes[i]);
    const int here = s.measure > 0.0 ? 1 : (s.measure < 0.0 ? -1 : 0);
    if (here != 0) {
      if (sign == 0) sign = here;
      if (here != sign) {
        throw Error(ErrorKind::unsupported_region,
                    "solid_volume_terms: cone chart folds over itself; region is not star-shaped from the apex (node " +
                        describe_node(set.nodes[i]) + ")");
      }
    }
    const double m = std::abs(s.measure) * set.weights[i];
    vol[i] = m;
    phiv[i] = m * phi(s.x);
    if (!std::isfinite(phiv[i])) {
      throw Error(ErrorKind::integration, "solid_volume_terms: non-finite integrand at node " + describe_node(set.nodes[i]));
    }
  }
  SolidTerms out;
  out.volume = pairwise_sum(vol);
  out.phi_integral = pairwise_sum(phiv);
  out.chart_orientation = sign == 0 ? 1 : sign;
  return out;
}

}  // namespace newtonflux
