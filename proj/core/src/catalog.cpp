#include "newtonflux/catalog.hpp"

#include "polar_chart.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <limits>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace newtonflux {

using detail::kChartMargin;
using detail::polar_box;
using detail::Profile;
using detail::revolution_jet;
using detail::RevolutionFrame;
using detail::standard_frame;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double unit_sphere_volume(int k) {
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

namespace {

// int_0^x sin^m and int_0^x sinh^m by the usual reduction formulas.
double sin_power_integral(int m, double x) {
  if (m == 0) return x;
  if (m == 1) return 1.0 - std::cos(x);
  return -std::pow(std::sin(x), m - 1) * std::cos(x) / m + (m - 1.0) / m * sin_power_integral(m - 2, x);
}

double sinh_power_integral(int m, double x) {
  if (m == 0) return x;
  if (m == 1) return std::cosh(x) - 1.0;
  return std::pow(std::sinh(x), m - 1) * std::cosh(x) / m - (m - 1.0) / m * sinh_power_integral(m - 2, x);
}

void check_n(int n) {
  if (n < 2 || n > 6) throw Error(ErrorKind::invalid_parameters, "catalog: n must lie in [2, 6]");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_parameters, what);
}

std::vector<double> umbilic_H(int n, double kappa) {
  std::vector<double> H(static_cast<std::size_t>(n + 1));
  for (int r = 0; r <= n; ++r) H[static_cast<std::size_t>(r)] = std::pow(kappa, r);
  return H;
}

// Picks the orientation with H_1 >= 0 at the center of the chart box.
Immersion orient_positive(const Immersion& imm) {
  const double h1 = curvature_at(imm, imm.domain().center()).H(1);
  return h1 < -1e-12 ? imm.reoriented(-imm.orientation()) : imm;
}

Profile euclid_flat_profile(double s) {
  Profile p;
  p.r = s;
  p.dr = 1.0;
  return p;
}

Profile sphere_profile(double s) {
  Profile p;
  p.a = std::cos(s);
  p.da = -std::sin(s);
  p.dda = -std::cos(s);
  p.r = std::sin(s);
  p.dr = std::cos(s);
  p.ddr = -std::sin(s);
  return p;
}

Profile hyperbolic_profile(double s) {
  Profile p;
  p.a = std::cosh(s);
  p.da = std::sinh(s);
  p.dda = std::cosh(s);
  p.r = std::sinh(s);
  p.dr = std::cosh(s);
  p.ddr = std::sinh(s);
  return p;
}

// Geodesic ball of radius rho about o = e_0 (origin in euclidean space) inside {z = 0}.
Immersion flat_ball(const AmbientSpace& space, double rho) {
  detail::ProfileFunction prof;
  switch (space.kind()) {
    case SpaceKind::euclidean: prof = euclid_flat_profile; break;
    case SpaceKind::spherical: prof = sphere_profile; break;
    case SpaceKind::hyperbolic: prof = hyperbolic_profile; break;
  }
  return Immersion(space, polar_box(space.n(), kChartMargin, rho), revolution_jet(standard_frame(space), prof));
}

// Lower half of the geodesic sphere S(o, rho): polar angle measured from the
// point below o, reaching {z = 0} at s = pi/2.
Immersion lower_hemisphere_of_sphere(const AmbientSpace& space, double rho) {
  double a = 0.0, R = rho;
  if (space.kind() == SpaceKind::spherical) { a = std::cos(rho); R = std::sin(rho); }
  if (space.kind() == SpaceKind::hyperbolic) { a = std::cosh(rho); R = std::sinh(rho); }
  return Immersion(space, polar_box(space.n(), kChartMargin, 0.5 * std::numbers::pi),
                   revolution_jet(standard_frame(space), [a, R](double s) {
                     Profile p;
                     p.a = a;
                     p.r = R * std::sin(s);
                     p.dr = R * std::cos(s);
                     p.ddr = -R * std::sin(s);
                     p.z = -R * std::cos(s);
                     p.dz = R * std::sin(s);
                     p.ddz = R * std::cos(s);
                     return p;
                   }));
}

CatalogEntry new_entry(std::string id, std::string family, Configuration config) {
  CatalogEntry e{std::move(id), std::move(family), std::move(config), {}, false, false, {}, std::nullopt};
  return e;
}

void add_standard_fields(CatalogEntry& e) {
  const AmbientSpace& space = e.space();
  const int m = space.embed_dim();
  const Vector ez = space.axis(m - 1);
  const int first = space.kind() == SpaceKind::euclidean ? 0 : 1;
  const Vector e1 = space.axis(first);
  const Vector e2 = space.axis(first + 1);
  switch (space.kind()) {
    case SpaceKind::euclidean:
      e.killing_fields = {AmbientField::translation(space, ez), AmbientField::rotation(space, e1, e2)};
      e.conformal_field = AmbientField::homothety(space, Vector::Zero(m));
      break;
    case SpaceKind::hyperbolic:
      e.killing_fields = {AmbientField::rotation(space, ez, space.origin()), AmbientField::rotation(space, e1, e2)};
      e.conformal_field = AmbientField::position_conformal(space, space.origin());
      break;
    case SpaceKind::spherical:
      e.killing_fields = {AmbientField::rotation(space, space.origin(), ez), AmbientField::rotation(space, e1, e2)};
      e.conformal_field = AmbientField::position_conformal(space, space.origin());
      break;
  }
}

PSurface horizontal_P(const AmbientSpace& space) {
  return PSurface::affine_section(space, space.axis(space.embed_dim() - 1), 0.0);
}

std::string canonical_id(const std::string& family, std::initializer_list<std::pair<const char*, double>> kv) {
  std::string id = family;
  char sep = ':';
  for (const auto& [k, v] : kv) {
    id += sep;
    id += k;
    id += '=';
    id += format_number(v);
    sep = ',';
  }
  return id;
}

}  // namespace

CatalogEntry euclidean_cap(int n, double R, double rho, bool large, std::optional<double> zP) {
  check_n(n);
  require(R > 0.0 && rho > 0.0, "euclidean_cap: R and rho must be positive");
  require(rho <= R, "euclidean_cap: rho must not exceed R");
  const AmbientSpace space(SpaceKind::euclidean, n);
  const double zc = (large ? 1.0 : -1.0) * std::sqrt(R * R - rho * rho);
  const double smax = std::atan2(rho / R, -zc / R);
  const Immersion M = orient_positive(Immersion(
      space, polar_box(n, kChartMargin, smax), revolution_jet(standard_frame(space), [R, zc](double s) {
        Profile p;
        p.r = R * std::sin(s);
        p.dr = R * std::cos(s);
        p.ddr = -R * std::sin(s);
        p.z = zc + R * std::cos(s);
        p.dz = -R * std::sin(s);
        p.ddz = -R * std::cos(s);
        return p;
      })));

  CatalogEntry e = new_entry("", "euclidean_cap", Configuration{M, std::nullopt, std::nullopt, Vector::Zero(n + 1)});
  const double area = unit_sphere_volume(n - 1);
  e.ref.H = umbilic_H(n, 1.0 / R);
  e.ref.kappa = 1.0 / R;
  e.ref.vol_M = area * std::pow(R, n) * sin_power_integral(n - 1, smax);
  e.ref.vol_boundary = area * std::pow(rho, n - 1);
  if (!zP) {
    e.config.P = horizontal_P(space);
    e.config.D = flat_ball(space, rho);
    e.ref.tau = -1.0 / rho;
    e.ref.contact = rho / R;
    e.ref.lambda = 0.0;
    e.ref.vol_D = area * std::pow(rho, n) / n;
    e.ref.boundary_radius = rho;
    e.id = canonical_id("euclidean_cap", {{"n", n}, {"R", R}, {"rho", rho}, {"large", large ? 1.0 : 0.0}});
  } else {
    const double z0 = *zP;
    const double rho0 = std::hypot(rho, z0);
    Vector c = Vector::Zero(n + 1);
    c(n) = z0;
    e.config.P = PSurface::euclidean_sphere(space, c, rho0);
    const double theta0 = std::acos(z0 / rho0);
    RevolutionFrame frame = standard_frame(space);
    frame.C = c;
    e.config.D = Immersion(space, polar_box(n, kChartMargin, theta0), revolution_jet(frame, [rho0](double s) {
                             Profile p;
                             p.r = rho0 * std::sin(s);
                             p.dr = rho0 * std::cos(s);
                             p.ddr = -rho0 * std::sin(s);
                             p.z = -rho0 * std::cos(s);
                             p.dz = rho0 * std::sin(s);
                             p.ddz = rho0 * std::cos(s);
                             return p;
                           }));
    e.config.apex = c - rho0 * space.axis(n);
    e.ref.tau = -z0 / (rho * rho0);
    e.ref.vol_D = area * std::pow(rho0, n) * sin_power_integral(n - 1, theta0);
    e.id = canonical_id("euclidean_cap", {{"n", n}, {"R", R}, {"rho", rho}, {"large", large ? 1.0 : 0.0}, {"zP", z0}});
  }
  e.constant_Hr = true;
  add_standard_fields(e);
  return e;
}

CatalogEntry tilted_disk(int n, double rho, double h, double tilt) {
  check_n(n);
  require(rho > 0.0, "tilted_disk: rho must be positive");
  require(std::abs(h) < rho, "tilted_disk: |h| must be smaller than rho");
  const AmbientSpace space(SpaceKind::euclidean, n);
  const Vector m = std::sin(tilt) * space.axis(0) + std::cos(tilt) * space.axis(n);
  RevolutionFrame frame;
  frame.C = h * m;
  frame.A = Vector::Zero(n + 1);
  frame.Q = Matrix::Zero(n + 1, n);
  frame.Q.col(0) = std::cos(tilt) * space.axis(0) - std::sin(tilt) * space.axis(n);
  for (int k = 1; k < n; ++k) frame.Q(k, k) = 1.0;
  frame.Z = m;
  const double radius = std::sqrt(rho * rho - h * h);
  const Immersion M(space, polar_box(n, kChartMargin, radius), revolution_jet(frame, euclid_flat_profile));

  RevolutionFrame dframe = frame;
  dframe.C = Vector::Zero(n + 1);
  const Immersion D(space, polar_box(n, kChartMargin, std::acos(-h / rho)), revolution_jet(dframe, [rho](double s) {
                      Profile p;
                      p.r = rho * std::sin(s);
                      p.dr = rho * std::cos(s);
                      p.ddr = -rho * std::sin(s);
                      p.z = -rho * std::cos(s);
                      p.dz = rho * std::sin(s);
                      p.ddz = rho * std::cos(s);
                      return p;
                    }));
  CatalogEntry e = new_entry(canonical_id("tilted_disk", {{"n", n}, {"rho", rho}, {"h", h}, {"tilt", tilt}}), "tilted_disk", Configuration{M, D, PSurface::euclidean_sphere(space, Vector::Zero(n + 1), rho), -rho * m});
  const double area = unit_sphere_volume(n - 1);
  e.ref.H = std::vector<double>(static_cast<std::size_t>(n + 1), 0.0);
  (*e.ref.H)[0] = 1.0;
  e.ref.kappa = 0.0;
  e.ref.tau = h / (rho * radius);
  e.ref.contact = -radius / rho;
  e.ref.vol_M = area * std::pow(radius, n) / n;
  e.ref.vol_boundary = area * std::pow(radius, n - 1);
  e.ref.vol_D = area * std::pow(rho, n) * sin_power_integral(n - 1, std::acos(-h / rho));
  e.constant_Hr = true;
  e.minimal = true;
  add_standard_fields(e);
  e.conformal_field = AmbientField::homothety(space, Vector::Zero(n + 1));
  return e;
}

CatalogEntry flat_disk(int n, double rho, bool plane_P) {
  CatalogEntry e = tilted_disk(n, rho, 0.0, 0.0);
  e.family = "flat_disk";
  e.id = "flat_disk:n=" + std::to_string(n) + ",rho=" + format_number(rho) + ",P=" + (plane_P ? "plane" : "sphere");
  e.ref.boundary_radius = rho;
  if (plane_P) {
    const AmbientSpace& space = e.space();
    e.config.P = horizontal_P(space);
    e.config.D = e.config.M;
    e.config.apex = Vector::Zero(n + 1);
    e.ref.tau = -1.0 / rho;
    e.ref.vol_D = *e.ref.vol_M;
  }
  return e;
}

CatalogEntry hyperbolic_cap(HyperbolicKind kind, int n, double param, double rho, bool large) {
  check_n(n);
  require(rho > 0.0, "hyperbolic_cap: rho must be positive");
  const AmbientSpace space(SpaceKind::hyperbolic, n);
  const double area = unit_sphere_volume(n - 1);
  CatalogEntry e = new_entry("", "hyperbolic_cap", Configuration{flat_ball(space, rho), std::nullopt, std::nullopt, space.origin()});
  e.ref.vol_boundary = area * std::pow(std::sinh(rho), n - 1);
  e.ref.vol_D = area * sinh_power_integral(n - 1, rho);
  e.ref.boundary_radius = rho;
  e.constant_Hr = true;
  switch (kind) {
    case HyperbolicKind::geodesic_sphere: {
      const double rc = param;
      require(rc >= rho, "hyperbolic_cap: rho_c must be at least rho");
      const double t = (large ? 1.0 : -1.0) * std::acosh(std::cosh(rc) / std::cosh(rho));
      const double smax = std::acos(std::clamp(-std::tanh(t) / std::tanh(rc), -1.0, 1.0));
      e.config.M = orient_positive(Immersion(
          space, polar_box(n, kChartMargin, smax), revolution_jet(standard_frame(space), [rc, t](double s) {
            const double cr = std::cosh(rc), sr = std::sinh(rc), ct = std::cosh(t), st = std::sinh(t);
            Profile p;
            p.a = cr * ct + sr * st * std::cos(s);
            p.da = -sr * st * std::sin(s);
            p.dda = -sr * st * std::cos(s);
            p.r = sr * std::sin(s);
            p.dr = sr * std::cos(s);
            p.ddr = -sr * std::sin(s);
            p.z = cr * st + sr * ct * std::cos(s);
            p.dz = -sr * ct * std::sin(s);
            p.ddz = -sr * ct * std::cos(s);
            return p;
          })));
      e.ref.kappa = 1.0 / std::tanh(rc);
      e.ref.contact = std::tanh(rho) / std::tanh(rc);
      e.ref.vol_M = area * std::pow(std::sinh(rc), n) * sin_power_integral(n - 1, smax);
      e.id = "hyperbolic_cap:kind=geodesic_sphere,n=" + std::to_string(n) + ",rho_c=" + format_number(rc) +
             ",rho=" + format_number(rho) + ",large=" + (large ? "1" : "0");
      break;
    }
    case HyperbolicKind::horosphere: {
      const double t = std::log(std::cosh(rho));
      const double smax = std::sinh(rho);
      e.config.M = orient_positive(Immersion(
          space, polar_box(n, kChartMargin, smax), revolution_jet(standard_frame(space), [t](double s) {
            const double ct = std::cosh(t), st = std::sinh(t), em = std::exp(-t);
            const double A = 1.0 + 0.5 * s * s, B = 0.5 * s * s;
            Profile p;
            p.a = ct * A - st * B;
            p.da = s * em;
            p.dda = em;
            p.r = s;
            p.dr = 1.0;
            p.z = st * A - ct * B;
            p.dz = -s * em;
            p.ddz = -em;
            return p;
          })));
      e.ref.kappa = 1.0;
      e.ref.contact = std::tanh(rho);
      e.ref.vol_M = area * std::pow(smax, n) / n;
      e.id = "hyperbolic_cap:kind=horosphere,n=" + std::to_string(n) + ",rho=" + format_number(rho);
      break;
    }
    case HyperbolicKind::equidistant: {
      const double d = param;
      require(d > 0.0, "hyperbolic_cap: d must be positive");
      const double t = -std::asinh(std::sinh(d) / std::cosh(rho));
      const double smax = std::acosh(std::tanh(d) / std::tanh(-t));
      e.config.M = orient_positive(Immersion(
          space, polar_box(n, kChartMargin, smax), revolution_jet(standard_frame(space), [t, d](double s) {
            const double ct = std::cosh(t), st = std::sinh(t), cd = std::cosh(d), sd = std::sinh(d);
            Profile p;
            p.a = ct * cd * std::cosh(s) + st * sd;
            p.da = ct * cd * std::sinh(s);
            p.dda = ct * cd * std::cosh(s);
            p.r = cd * std::sinh(s);
            p.dr = cd * std::cosh(s);
            p.ddr = cd * std::sinh(s);
            p.z = st * cd * std::cosh(s) + ct * sd;
            p.dz = st * cd * std::sinh(s);
            p.ddz = st * cd * std::cosh(s);
            return p;
          })));
      e.ref.kappa = std::tanh(d);
      e.ref.contact = std::tanh(d) * std::tanh(rho);
      e.ref.vol_M = area * std::pow(std::cosh(d), n) * sinh_power_integral(n - 1, smax);
      e.id = "hyperbolic_cap:kind=equidistant,n=" + std::to_string(n) + ",d=" + format_number(d) +
             ",rho=" + format_number(rho);
      break;
    }
    case HyperbolicKind::totally_geodesic: {
      e.config.M = flat_ball(space, rho);
      e.config.P = PSurface::geodesic_sphere(space, space.origin(), rho);
      e.config.D = lower_hemisphere_of_sphere(space, rho);
      e.config.apex = std::cosh(rho) * space.origin() - std::sinh(rho) * space.axis(n + 1);
      e.ref.kappa = 0.0;
      e.ref.tau = 0.0;
      e.ref.contact = 1.0;
      e.ref.vol_M = *e.ref.vol_D;
      e.ref.vol_D = area * std::pow(std::sinh(rho), n) * sin_power_integral(n - 1, 0.5 * std::numbers::pi);
      e.ref.boundary_radius.reset();
      e.minimal = true;
      e.id = "hyperbolic_cap:kind=totally_geodesic,n=" + std::to_string(n) + ",rho=" + format_number(rho);
      break;
    }
  }
  e.ref.H = umbilic_H(n, *e.ref.kappa);
  if (kind != HyperbolicKind::totally_geodesic) {
    e.config.P = horizontal_P(space);
    e.config.D = flat_ball(space, rho);
    e.ref.tau = -1.0 / std::tanh(rho);
    e.ref.lambda = 0.0;
  }
  add_standard_fields(e);
  return e;
}

CatalogEntry spherical_cap(int n, double rc, double rho, bool large, bool hemisphere) {
  check_n(n);
  const double half_pi = 0.5 * std::numbers::pi;
  require(rho > 0.0 && rho < half_pi, "spherical_cap: rho must lie in (0, pi/2)");
  require(rc >= rho && rc < half_pi, "spherical_cap: rho_c must lie in [rho, pi/2)");
  const AmbientSpace space(SpaceKind::spherical, n);
  const double beta = (large ? 1.0 : -1.0) * std::acos(std::cos(rc) / std::cos(rho));
  if (hemisphere && beta + rc >= half_pi) {
    throw Error(ErrorKind::invalid_parameters,
                "spherical_cap: cap leaves the open hemisphere centered at the center of D (beta + rho_c >= pi/2)");
  }
  const double smax = std::acos(std::clamp(-std::tan(beta) / std::tan(rc), -1.0, 1.0));
  const Immersion M = orient_positive(Immersion(
      space, polar_box(n, kChartMargin, smax), revolution_jet(standard_frame(space), [rc, beta](double s) {
        const double cr = std::cos(rc), sr = std::sin(rc), cb = std::cos(beta), sb = std::sin(beta);
        Profile p;
        p.a = cr * cb - sr * sb * std::cos(s);
        p.da = sr * sb * std::sin(s);
        p.dda = sr * sb * std::cos(s);
        p.r = sr * std::sin(s);
        p.dr = sr * std::cos(s);
        p.ddr = -sr * std::sin(s);
        p.z = cr * sb + sr * cb * std::cos(s);
        p.dz = -sr * cb * std::sin(s);
        p.ddz = -sr * cb * std::cos(s);
        return p;
      })));
  const double area = unit_sphere_volume(n - 1);
  CatalogEntry e = new_entry(canonical_id("spherical_cap", {{"n", n}, {"rho_c", rc}, {"rho", rho}, {"large", large ? 1.0 : 0.0},
                                                      {"hemisphere", hemisphere ? 1.0 : 0.0}}), "spherical_cap", Configuration{M, flat_ball(space, rho), horizontal_P(space), space.origin()});
  e.ref.kappa = 1.0 / std::tan(rc);
  e.ref.H = umbilic_H(n, *e.ref.kappa);
  e.ref.tau = -1.0 / std::tan(rho);
  e.ref.contact = std::tan(rho) / std::tan(rc);
  e.ref.lambda = 0.0;
  e.ref.vol_M = area * std::pow(std::sin(rc), n) * sin_power_integral(n - 1, smax);
  e.ref.vol_boundary = area * std::pow(std::sin(rho), n - 1);
  e.ref.vol_D = area * sin_power_integral(n - 1, rho);
  e.ref.boundary_radius = rho;
  e.constant_Hr = true;
  add_standard_fields(e);
  return e;
}

CatalogEntry spherical_disk(int n, double rho) {
  check_n(n);
  require(rho > 0.0 && rho < 0.5 * std::numbers::pi, "spherical_disk: rho must lie in (0, pi/2)");
  const AmbientSpace space(SpaceKind::spherical, n);
  const double area = unit_sphere_volume(n - 1);
  CatalogEntry e = new_entry("spherical_disk:n=" + std::to_string(n) + ",rho=" + format_number(rho), "spherical_disk", Configuration{flat_ball(space, rho), lower_hemisphere_of_sphere(space, rho),
                                         PSurface::geodesic_sphere(space, space.origin(), rho),
                                         std::cos(rho) * space.origin() - std::sin(rho) * space.axis(n + 1)});
  e.ref.kappa = 0.0;
  e.ref.H = umbilic_H(n, 0.0);
  e.ref.tau = 0.0;
  e.ref.contact = 1.0;
  e.ref.vol_M = area * sin_power_integral(n - 1, rho);
  e.ref.vol_boundary = area * std::pow(std::sin(rho), n - 1);
  e.ref.vol_D = area * std::pow(std::sin(rho), n) * sin_power_integral(n - 1, 0.5 * std::numbers::pi);
  e.constant_Hr = true;
  e.minimal = true;
  add_standard_fields(e);
  return e;
}

CatalogEntry tangent_graph(int n, double rho, double k) {
  check_n(n);
  require(rho > 0.0, "tangent_graph: rho must be positive");
  const AmbientSpace space(SpaceKind::euclidean, n);
  const JetFunction base = revolution_jet(standard_frame(space), euclid_flat_profile);
  const JetFunction jet = detail::add_height(base, detail::radial_height([rho, k](double s) {
                                               const double w = rho * rho - s * s;
                                               Profile p;
                                               p.z = k * w * w;
                                               p.dz = -4.0 * k * s * w;
                                               p.ddz = -4.0 * k * w + 8.0 * k * s * s;
                                               return p;
                                             }),
                                             1.0, space.axis(n));
  const Immersion M = orient_positive(Immersion(space, polar_box(n, kChartMargin, rho), jet));
  CatalogEntry e = new_entry(canonical_id("tangent_graph", {{"n", n}, {"rho", rho}, {"k", k}}), "tangent_graph", Configuration{M, flat_ball(space, rho), horizontal_P(space), Vector::Zero(n + 1)});
  e.ref.tau = -1.0 / rho;
  e.ref.contact = 0.0;
  e.ref.vol_boundary = unit_sphere_volume(n - 1) * std::pow(rho, n - 1);
  e.ref.vol_D = unit_sphere_volume(n - 1) * std::pow(rho, n) / n;
  add_standard_fields(e);
  return e;
}

CatalogEntry saddle_graph(int n, double rho) {
  check_n(n);
  require(rho > 0.0, "saddle_graph: rho must be positive");
  const AmbientSpace space(SpaceKind::euclidean, n);
  const JetFunction jet = detail::add_height(revolution_jet(standard_frame(space), euclid_flat_profile),
                                             detail::saddle_height(n), 1.0, space.axis(n));
  CatalogEntry e = new_entry(canonical_id("saddle_graph", {{"n", n}, {"rho", rho}}), "saddle_graph", Configuration{Immersion(space, polar_box(n, kChartMargin, rho), jet), std::nullopt,
                                         std::nullopt, Vector::Zero(n + 1)});
  add_standard_fields(e);
  return e;
}

CatalogEntry perturbed(const CatalogEntry& base, double amp, std::uint64_t seed) {
  require(std::isfinite(amp), "perturbed: amp must be finite");
  const Immersion& B = base.M();
  const AmbientSpace& space = B.space();
  const int n = B.n();
  const Vector coeffs = detail::bump_coefficients(n, seed);
  const JetFunction base_jet = [B](const Vector& u) { return B.jet(u); };
  const JetFunction raised = detail::add_height(base_jet, detail::bump_height(n, B.domain().hi(0), coeffs), amp,
                                                space.axis(space.embed_dim() - 1));
  const Immersion M(space, B.domain(), detail::project_to_model(space, raised), B.orientation());

  double min_sv = std::numeric_limits<double>::infinity();
  try {
    for (const Vector& u : rule_nodes(M.domain(), TensorRule::uniform(n, 6))) {
      min_sv = std::min(min_sv, min_singular_value(M, u));
      (void)curvature_at(M, u);
    }
  } catch (const Error& err) {
    throw Error(ErrorKind::invalid_parameters, std::string("perturbed: amplitude makes the chart degenerate: ") + err.what());
  }
  require(min_sv > 1e-10, "perturbed: amplitude makes the chart degenerate");

  CatalogEntry e = base;
  e.family = "perturbed_" + base.family;
  const auto colon = base.id.find(':');
  e.id = "perturbed_" + base.id + (colon == std::string::npos ? ":" : ",") + "amp=" + format_number(amp) +
         ",seed=" + std::to_string(seed);
  e.config.M = M;
  if (amp != 0.0) {
    AnalyticReference ref;
    ref.tau = base.ref.tau;
    ref.vol_boundary = base.ref.vol_boundary;
    ref.vol_D = base.ref.vol_D;
    ref.boundary_radius = base.ref.boundary_radius;
    e.ref = ref;
    e.constant_Hr = false;
    e.minimal = false;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Descriptors

namespace {

void bad_field(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::configuration, "descriptor field '" + key + "': " + why);
}

class ParamReader {
 public:
  explicit ParamReader(const Descriptor& d) : d_(d) {
    std::set<std::string> seen;
    for (const auto& [k, v] : d.params) {
      if (!seen.insert(k).second) bad_field(k, "given more than once");
    }
  }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    for (const auto& [k, v] : d_.params) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto v = raw(key);
    double out = 0.0;
    if (!v) {
      if (!fallback) bad_field(key, "required for family '" + d_.family + "'");
      out = *fallback;
    } else {
      out = parse_number(key, *v);
    }
    canonical_.emplace_back(key, format_number(out));
    return out;
  }

  std::optional<double> optional_number(const std::string& key) {
    const auto v = raw(key);
    if (!v) return std::nullopt;
    const double out = parse_number(key, *v);
    canonical_.emplace_back(key, format_number(out));
    return out;
  }

  int integer(const std::string& key, int fallback) {
    const auto v = raw(key);
    long long out = fallback;
    if (v) out = parse_integer(key, *v);
    canonical_.emplace_back(key, std::to_string(out));
    return static_cast<int>(out);
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    const auto v = raw(key);
    std::uint64_t out = fallback;
    if (v) {
      const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
      if (res.ec != std::errc() || res.ptr != v->data() + v->size()) bad_field(key, "expected a non-negative integer, got '" + *v + "'");
    }
    canonical_.emplace_back(key, std::to_string(out));
    return out;
  }

  bool flag(const std::string& key, bool fallback) {
    const auto v = raw(key);
    bool out = fallback;
    if (v) {
      if (*v == "1" || *v == "true") out = true;
      else if (*v == "0" || *v == "false") out = false;
      else bad_field(key, "expected 0, 1, true or false, got '" + *v + "'");
    }
    canonical_.emplace_back(key, out ? "1" : "0");
    return out;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& options,
                     std::optional<std::string> fallback = std::nullopt) {
    const auto v = raw(key);
    std::string out;
    if (!v) {
      if (!fallback) bad_field(key, "required for family '" + d_.family + "'");
      out = *fallback;
    } else {
      out = *v;
    }
    if (std::find(options.begin(), options.end(), out) == options.end()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : "|") + o;
      bad_field(key, "expected one of " + list + ", got '" + out + "'");
    }
    canonical_.emplace_back(key, out);
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : d_.params) {
      if (!used_.count(k)) bad_field(k, "not a parameter of family '" + d_.family + "'");
    }
  }

  Descriptor canonical() const { return Descriptor{d_.family, canonical_}; }

 private:
  static double parse_number(const std::string& key, const std::string& text) {
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(out)) {
      bad_field(key, "expected a finite decimal number, got '" + text + "'");
    }
    return out;
  }

  static long long parse_integer(const std::string& key, const std::string& text) {
    long long out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      bad_field(key, "expected an integer, got '" + text + "'");
    }
    return out;
  }

  const Descriptor& d_;
  std::set<std::string> used_;
  std::vector<std::pair<std::string, std::string>> canonical_;
};

const std::vector<std::string> kBaseFamilies = {"euclidean_cap",  "flat_disk",      "tilted_disk",
                                                "hyperbolic_cap", "spherical_cap",  "spherical_disk",
                                                "tangent_graph",  "saddle_graph"};

CatalogEntry build_base(const std::string& family, ParamReader& rd) {
  if (family == "euclidean_cap") {
    const int n = rd.integer("n", 2);
    const double R = rd.number("R");
    const double rho = rd.number("rho");
    const bool large = rd.flag("large", false);
    const auto zP = rd.optional_number("zP");
    return euclidean_cap(n, R, rho, large, zP);
  }
  if (family == "flat_disk") {
    const int n = rd.integer("n", 2);
    const double rho = rd.number("rho", 1.0);
    const std::string P = rd.choice("P", {"sphere", "plane"}, std::string("sphere"));
    return flat_disk(n, rho, P == "plane");
  }
  if (family == "tilted_disk") {
    const int n = rd.integer("n", 2);
    const double rho = rd.number("rho", 1.0);
    const double h = rd.number("h");
    const double tilt = rd.number("tilt");
    return tilted_disk(n, rho, h, tilt);
  }
  if (family == "hyperbolic_cap") {
    const std::string kind = rd.choice("kind", {"geodesic_sphere", "horosphere", "equidistant", "totally_geodesic"});
    const int n = rd.integer("n", 2);
    if (kind == "geodesic_sphere") {
      const double rc = rd.number("rho_c");
      const double rho = rd.number("rho");
      const bool large = rd.flag("large", false);
      return hyperbolic_cap(HyperbolicKind::geodesic_sphere, n, rc, rho, large);
    }
    if (kind == "equidistant") {
      const double d = rd.number("d");
      const double rho = rd.number("rho");
      return hyperbolic_cap(HyperbolicKind::equidistant, n, d, rho);
    }
    const double rho = rd.number("rho");
    return hyperbolic_cap(kind == "horosphere" ? HyperbolicKind::horosphere : HyperbolicKind::totally_geodesic, n, 0.0,
                          rho);
  }
  if (family == "spherical_cap") {
    const int n = rd.integer("n", 2);
    const double rc = rd.number("rho_c");
    const double rho = rd.number("rho");
    const bool large = rd.flag("large", false);
    const bool hemisphere = rd.flag("hemisphere", false);
    return spherical_cap(n, rc, rho, large, hemisphere);
  }
  if (family == "spherical_disk") {
    const int n = rd.integer("n", 2);
    const double rho = rd.number("rho");
    return spherical_disk(n, rho);
  }
  if (family == "tangent_graph") {
    const int n = rd.integer("n", 2);
    const double rho = rd.number("rho", 1.0);
    const double k = rd.number("k", 1.0);
    return tangent_graph(n, rho, k);
  }
  if (family == "saddle_graph") {
    const int n = rd.integer("n", 2);
    const double rho = rd.number("rho", 1.0);
    return saddle_graph(n, rho);
  }
  throw Error(ErrorKind::configuration, "descriptor: unknown catalog family '" + family + "'");
}

}  // namespace

Descriptor parse_descriptor(const std::string& text) {
  Descriptor d;
  const auto colon = text.find(':');
  d.family = text.substr(0, colon);
  if (d.family.empty()) throw Error(ErrorKind::configuration, "descriptor: missing family name");
  for (char c : d.family) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
      throw Error(ErrorKind::configuration, "descriptor: malformed family name '" + d.family + "'");
    }
  }
  if (colon == std::string::npos) return d;
  const std::string rest = text.substr(colon + 1);
  if (rest.empty()) return d;
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::configuration, "descriptor: malformed parameter '" + item + "' (expected key=value)");
    }
    d.params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return d;
}

std::string format_descriptor(const Descriptor& d) {
  std::string out = d.family;
  char sep = ':';
  for (const auto& [k, v] : d.params) {
    out += sep;
    out += k + "=" + v;
    sep = ',';
  }
  return out;
}

CatalogEntry make_entry(const Descriptor& d) {
  ParamReader rd(d);
  const std::string prefix = "perturbed_";
  CatalogEntry e = [&] {
    if (d.family.rfind(prefix, 0) != 0) return build_base(d.family, rd);
    const CatalogEntry base = build_base(d.family.substr(prefix.size()), rd);
    const double amp = rd.number("amp", 0.05);
    const std::uint64_t seed = rd.seed("seed", 1);
    return perturbed(base, amp, seed);
  }();
  rd.finish();
  e.id = format_descriptor(rd.canonical());
  return e;
}

CatalogEntry make_entry(const std::string& text) { return make_entry(parse_descriptor(text)); }

std::vector<std::string> catalog_families() {
  std::vector<std::string> out = kBaseFamilies;
  for (const auto& f : kBaseFamilies) out.push_back("perturbed_" + f);
  return out;
}

}  // namespace newtonflux
