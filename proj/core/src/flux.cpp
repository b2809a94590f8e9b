#include "newtonflux/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace newtonflux {

namespace {

int resolve_order(const FluxOptions& options, int n) {
  return options.order > 0 ? options.order : default_order(n);
}

Vector conormal(const AmbientSpace& space, const CurvatureData& cd) {
  const int n = static_cast<int>(cd.g.rows());
  const Vector grad = cd.tangents * cd.g.ldlt().solve(Vector::Unit(n, 0));
  return grad / space.norm(grad);
}

double relative(double lhs, double rhs) { return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)); }

void require_r(int r, int n, const char* where) {
  if (r < 1 || r > n) {
    std::ostringstream os;
    os << where << ": r must lie in [1, " << n << "], got " << r;
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

double xi_sign_of(const Configuration& config, int order) {
  const std::vector<BoundaryFrame> frames = boundary_frames(config, order);
  const double s = frames.front().xi_sign;
  for (const BoundaryFrame& f : frames) {
    if (f.xi_sign != s) {
      throw Error(ErrorKind::configuration, "orientation of xi is not constant along the boundary");
    }
  }
  return s;
}

// +1 when N points away from the apex along M (outward from the cone), -1 when toward it.
double omega_orientation(const Configuration& config, int order) {
  const Immersion& M = config.M;
  const AmbientSpace& space = M.space();
  int sign = 0;
  for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(M.n(), std::min(order, 8)))) {
    const SurfaceFrame fr = evaluate_frame(M, u);
    const double v = space.inner(fr.N, space.project_tangent(fr.p, config.apex - fr.p));
    const int here = v > 0.0 ? -1 : (v < 0.0 ? 1 : 0);
    if (here == 0) continue;
    if (sign == 0) sign = here;
    if (here != sign) {
      throw Error(ErrorKind::unsupported_region, "solid region is not star-shaped from the center of D");
    }
  }
  if (sign == 0) throw Error(ErrorKind::unsupported_region, "cannot orient the solid region");
  return static_cast<double>(sign);
}

void require_solid_support(const Configuration& config) {
  if (!config.P || !config.P->totally_geodesic() || config.P->residual(config.apex) > 1e-9) {
    throw Error(ErrorKind::unsupported_region,
                "solid term requires a totally geodesic P containing the center of D");
  }
}

struct Evaluation {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<std::pair<std::string, double>> terms;
};

FluxReport assemble(const std::string& formula, int r, const FluxOptions& options, int order,
                    const AmbientField& Y, const std::function<Evaluation(int)>& evaluate) {
  FluxReport rep;
  rep.formula = formula;
  rep.r = r;
  rep.config = options.label;
  rep.field = Y.describe();
  const Evaluation base = evaluate(order);
  rep.lhs = base.lhs;
  rep.rhs = base.rhs;
  rep.terms = base.terms;
  rep.abs_residual = std::abs(base.lhs - base.rhs);
  rep.rel_residual = relative(base.lhs, base.rhs);
  rep.quadrature.orders = {order};
  rep.quadrature.refine_delta = -1.0;
  if (options.refine) {
    const Evaluation fine = evaluate(2 * order);
    rep.quadrature.orders.push_back(2 * order);
    const double scale = 1.0 + std::abs(base.lhs) + std::abs(base.rhs);
    rep.quadrature.refine_delta =
        std::max(std::abs(fine.lhs - base.lhs), std::abs(fine.rhs - base.rhs)) / scale;
    rep.quadrature.refined_rel_residual = relative(fine.lhs, fine.rhs);
  }
  rep.assumptions.push_back("ambient is a space form, so div T_{r-1} vanishes and its term is omitted");
  return rep;
}

void gate_constant(const HrStatistics& st, int r, double tol) {
  if (!st.constant(tol)) {
    std::ostringstream os;
    os.precision(6);
    os << "precondition violated: H_" << r << " is not constant on M (min " << st.min << ", max " << st.max
       << ", tolerance " << tol << " relative)";
    throw Error(ErrorKind::precondition_violation, os.str());
  }
}

}  // namespace

HrStatistics hr_statistics(const Immersion& M, int r, int order) {
  HrStatistics st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -std::numeric_limits<double>::infinity();
  std::vector<double> values;
  for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(M.n(), order))) {
    const double h = curvature_at(M, u).H(r);
    values.push_back(h);
    st.min = std::min(st.min, h);
    st.max = std::max(st.max, h);
  }
  st.samples = static_cast<int>(values.size());
  st.mean = pairwise_sum(values) / static_cast<double>(values.size());
  return st;
}

double boundary_flux(const Immersion& M, const AmbientField& Y, int r, int order) {
  const AmbientSpace& space = M.space();
  const RegionSpec region = boundary_region(M);
  return integrate(
      region,
      [&](const Vector& t, const Vector& x) {
        const CurvatureData cd = curvature_at(M, M.boundary_chart_point(t));
        const Vector nu = conormal(space, cd);
        return cd.T_form(space, r - 1, nu, Y(x));
      },
      order);
}

double domain_flux(const Configuration& config, const AmbientField& Y, int order) {
  if (!config.D || !config.P) throw Error(ErrorKind::configuration, "flux: configuration has no spanning domain D");
  const double s = xi_sign_of(config, order);
  const PSurface& P = *config.P;
  const AmbientSpace& space = config.M.space();
  return integrate(
      surface_region(*config.D, RegionKind::disk_D),
      [&](const Vector&, const Vector& x) { return -s * space.inner(Y(x), P.normal(x)); }, order);
}

FluxReport flux_killing(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options) {
  const Immersion& M = config.M;
  const int n = M.n();
  require_r(r, n, "flux_killing");
  if (!Y.is_killing()) throw Error(ErrorKind::invalid_input, "flux_killing: field is not a Killing field");
  validate_configuration(config);
  const int order = resolve_order(options, n);
  const HrStatistics st = hr_statistics(M, r, order);
  gate_constant(st, r, options.constancy_tolerance);
  const double c = r * binomial(n, r);
  return assemble("killing", r, options, order, Y, [&](int o) {
    Evaluation e;
    const double bd = boundary_flux(M, Y, r, o);
    const double dd = domain_flux(config, Y, o);
    e.lhs = bd;
    e.rhs = -c * st.mean * dd;
    e.terms = {{"H_r", st.mean}, {"int_D <Y,n_D>", dd}};
    return e;
  });
}

FluxReport flux_conformal(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options) {
  const Immersion& M = config.M;
  const int n = M.n();
  require_r(r, n, "flux_conformal");
  validate_configuration(config);
  const int order = resolve_order(options, n);
  const HrStatistics st = hr_statistics(M, r, order);
  gate_constant(st, r, options.constancy_tolerance);
  const double c = r * binomial(n, r);
  const bool killing = Y.is_killing();
  double eps = 1.0;
  if (!killing) {
    require_solid_support(config);
    eps = omega_orientation(config, order);
  }
  FluxReport rep = assemble("conformal", r, options, order, Y, [&](int o) {
    Evaluation e;
    e.lhs = boundary_flux(M, Y, r, o);
    const double dd = domain_flux(config, Y, o);
    double phiH = 0.0;
    double omega_phi = 0.0;
    double omega_vol = 0.0;
    if (!killing) {
      phiH = integrate(
          surface_region(M),
          [&](const Vector& u, const Vector& x) { return Y.conformal_factor(x) * curvature_at(M, u).H(r - 1); }, o);
      const SolidTerms solid = solid_volume_terms(
          cone_region(M, config.apex), [&](const Vector& x) { return Y.conformal_factor(x); },
          TensorRule::uniform(n + 1, o));
      omega_phi = solid.phi_integral;
      omega_vol = solid.volume;
    }
    e.rhs = c * (phiH - st.mean * dd + (n + 1) * st.mean * eps * omega_phi);
    e.terms = {{"H_r", st.mean},
               {"int_M phi H_{r-1}", phiH},
               {"int_D <Y,n_D>", dd},
               {"vol(Omega)", omega_vol},
               {"int_Omega phi", omega_phi},
               {"omega_orientation", eps}};
    return e;
  });
  if (killing) rep.assumptions.push_back("Killing field: conformal factor vanishes, solid term omitted");
  return rep;
}

FluxReport flux_minimal(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options) {
  const Immersion& M = config.M;
  const int n = M.n();
  require_r(r, n, "flux_minimal");
  const int order = resolve_order(options, n);
  const HrStatistics st = hr_statistics(M, r, order);
  if (std::max(std::abs(st.min), std::abs(st.max)) >= options.minimality_tolerance) {
    std::ostringstream os;
    os << "precondition violated: H_" << r << " is not zero on M (max |H_r| "
       << std::max(std::abs(st.min), std::abs(st.max)) << ")";
    throw Error(ErrorKind::precondition_violation, os.str());
  }
  const double c = r * binomial(n, r);
  return assemble("minimal", r, options, order, Y, [&](int o) {
    Evaluation e;
    e.lhs = boundary_flux(M, Y, r, o);
    const double phiH = integrate(
        surface_region(M),
        [&](const Vector& u, const Vector& x) { return Y.conformal_factor(x) * curvature_at(M, u).H(r - 1); }, o);
    e.rhs = c * phiH;
    e.terms = {{"max |H_r|", std::max(std::abs(st.min), std::abs(st.max))}, {"int_M phi H_{r-1}", phiH}};
    return e;
  });
}

VolumeBound volume_bound(const Configuration& config, const FluxOptions& options) {
  const Immersion& M = config.M;
  const AmbientSpace& space = M.space();
  const int n = M.n();
  if (!config.P) throw Error(ErrorKind::configuration, "volume_bound: configuration has no reference hypersurface");
  const auto sphere = config.P->as_geodesic_sphere();
  if (!sphere) throw Error(ErrorKind::configuration, "volume_bound: boundary must lie on a geodesic sphere");
  const int order = resolve_order(options, n);
  const HrStatistics st = hr_statistics(M, 1, order);
  if (std::max(std::abs(st.min), std::abs(st.max)) >= options.minimality_tolerance) {
    throw Error(ErrorKind::precondition_violation, "volume_bound: M is not minimal on the sampled nodes");
  }
  const RegionSpec bregion = boundary_region(M);
  for (const Vector& t : rule_nodes(bregion.box, TensorRule::uniform(n - 1, order))) {
    if (config.P->residual(M.position(M.boundary_chart_point(t))) > 1e-8) {
      throw Error(ErrorKind::configuration, "volume_bound: boundary of M is not on the geodesic sphere");
    }
  }
  VolumeBound vb;
  vb.rho = sphere->second;
  const Vector& a = sphere->first;
  const auto one = [](const Vector&, const Vector&) { return 1.0; };
  vb.vol_M = integrate(surface_region(M), one, order);
  vb.vol_boundary = integrate(bregion, one, order);
  switch (space.kind()) {
    case SpaceKind::euclidean: vb.bound = vb.rho / n * vb.vol_boundary; break;
    case SpaceKind::hyperbolic: vb.bound = std::sinh(vb.rho) / n * vb.vol_boundary; break;
    case SpaceKind::spherical: {
      double rho0 = 0.0;
      for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(n, order))) {
        rho0 = std::max(rho0, space.distance(a, M.position(u)));
      }
      for (const Vector& t : rule_nodes(bregion.box, TensorRule::uniform(n - 1, order))) {
        rho0 = std::max(rho0, space.distance(a, M.position(M.boundary_chart_point(t))));
      }
      if (!(rho0 < 0.5 * std::numbers::pi)) {
        throw Error(ErrorKind::configuration, "volume_bound: M leaves the open hemisphere centered at the sphere's center");
      }
      vb.rho0 = rho0;
      vb.bound = std::sin(vb.rho) / (n * std::cos(rho0)) * vb.vol_boundary;
      break;
    }
  }
  vb.slack = vb.bound - vb.vol_M;
  vb.equality = std::abs(vb.slack) < 1e-7 * vb.bound;
  return vb;
}

HrEstimate hr_estimate(const Configuration& config, int r, const FluxOptions& options) {
  const Immersion& M = config.M;
  const AmbientSpace& space = M.space();
  const int n = M.n();
  require_r(r, n, "hr_estimate");
  validate_configuration(config);
  if (!config.P->totally_geodesic()) {
    throw Error(ErrorKind::configuration, "hr_estimate: the boundary must lie on a totally geodesic P");
  }
  if (!config.D) throw Error(ErrorKind::configuration, "hr_estimate: configuration has no spanning domain D");
  const int order = resolve_order(options, n);
  const HrStatistics st = hr_statistics(M, r, order);
  gate_constant(st, r, options.constancy_tolerance);
  const Vector& o = config.apex;

  auto weight = [&](const Vector& x) {
    switch (space.kind()) {
      case SpaceKind::euclidean: return 1.0;
      case SpaceKind::hyperbolic: return std::cosh(space.distance(o, x));
      case SpaceKind::spherical: return std::cos(space.distance(o, x));
    }
    return 1.0;
  };

  if (space.kind() == SpaceKind::spherical) {
    for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(n, order))) {
      if (!(space.inner(M.position(u), o) > 0.0)) {
        throw Error(ErrorKind::configuration, "hr_estimate: M is not contained in the open hemisphere centered at D's center");
      }
    }
  }

  HrEstimate est;
  est.r = r;
  est.H_r = st.mean;
  est.abs_Hr = std::abs(st.mean);
  est.samples = st.samples;

  const std::vector<BoundaryFrame> frames = boundary_frames(config, order);
  double cmax = -std::numeric_limits<double>::infinity();
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (const BoundaryFrame& f : frames) {
    cmax = std::max(cmax, weight(f.p));
    const double d = space.distance(o, f.p);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  const auto h_abs = [&](const Vector& t) {
    const BoundaryFrame f = build_frame(config, t);
    const SymCoeffs s = elem_sym(std::span<const double>(f.tau.data(), static_cast<std::size_t>(f.tau.size())));
    return std::abs(s[r - 1] / binomial(n - 1, r - 1));
  };
  const RegionSpec bregion = boundary_region(M);
  const double h_int = integrate(bregion, [&](const Vector& t, const Vector&) { return h_abs(t); }, order);
  const double hw_int =
      integrate(bregion, [&](const Vector& t, const Vector& x) { return h_abs(t) * weight(x); }, order);

  const RegionSpec dregion = surface_region(*config.D, RegionKind::disk_D);
  est.vol_D = integrate(dregion, [](const Vector&, const Vector&) { return 1.0; }, order);
  double wmin = std::numeric_limits<double>::infinity();
  const double w_int = integrate(
      dregion,
      [&](const Vector&, const Vector& x) {
        const double w = weight(x);
        wmin = std::min(wmin, w);
        return w;
      },
      order);

  switch (space.kind()) {
    case SpaceKind::euclidean: est.constant_C = 1.0; break;
    case SpaceKind::hyperbolic: est.constant_C = cmax; break;
    case SpaceKind::spherical: est.constant_C = cmax / wmin; break;
  }
  est.boundary_h_integral = h_int;
  est.bound_general = est.constant_C / (n * est.vol_D) * h_int;
  est.bound = hw_int / (n * w_int);
  if (dmax - dmin < 1e-9 * (1.0 + dmax)) {
    const double rho = 0.5 * (dmax + dmin);
    est.boundary_radius = rho;
    switch (space.kind()) {
      case SpaceKind::euclidean: est.bound_round = std::pow(rho, -r); break;
      case SpaceKind::hyperbolic: est.bound_round = std::pow(1.0 / std::tanh(rho), r); break;
      case SpaceKind::spherical: est.bound_round = std::pow(1.0 / std::tan(rho), r); break;
    }
  }
  est.slack = est.bound - est.abs_Hr;
  return est;
}

}  // namespace newtonflux
