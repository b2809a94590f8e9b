#pragma once

// Model configurations with closed-form reference data: umbilic caps and
// minimal disks in the three space forms, graphs for negative controls and a
// seeded perturbation of any of them.
//
// Descriptor grammar:  family[:key=value{,key=value}]
//   euclidean_cap   n, R, rho, large, [zP]
//   flat_disk       n, rho, P=sphere|plane
//   tilted_disk     n, rho, h, tilt
//   hyperbolic_cap  kind=geodesic_sphere|horosphere|equidistant|totally_geodesic,
//                   n, rho, rho_c (geodesic_sphere), d (equidistant), large
//   spherical_cap   n, rho_c, rho, large, hemisphere
//   spherical_disk  n, rho
//   tangent_graph   n, rho, k
//   saddle_graph    n, rho
//   perturbed_<family>  the base family's keys plus amp, seed

#include "newtonflux/ambient.hpp"
#include "newtonflux/boundary.hpp"
#include "newtonflux/immersion.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace newtonflux {

struct AnalyticReference {
  std::optional<std::vector<double>> H;  // H_0 .. H_n
  std::optional<double> kappa;           // common principal curvature (umbilic)
  std::optional<double> tau;             // common principal curvature of the boundary in P
  std::optional<double> contact;         // <xi, nu>
  std::optional<double> lambda;          // umbilicity factor of P w.r.t. xi
  std::optional<double> vol_M;
  std::optional<double> vol_boundary;
  std::optional<double> vol_D;
  std::optional<double> boundary_radius;  // geodesic radius of the boundary about the center of D
};

struct CatalogEntry {
  std::string id;
  std::string family;
  Configuration config;
  AnalyticReference ref;
  bool constant_Hr = false;
  bool minimal = false;
  std::vector<AmbientField> killing_fields;
  std::optional<AmbientField> conformal_field;

  const Immersion& M() const noexcept { return config.M; }
  const AmbientSpace& space() const noexcept { return config.M.space(); }
  int n() const noexcept { return config.M.n(); }
};

struct Descriptor {
  std::string family;
  std::vector<std::pair<std::string, std::string>> params;
};

/// Parses "family:key=val,...". Throws configuration errors naming the
/// offending field.
Descriptor parse_descriptor(const std::string& text);
std::string format_descriptor(const Descriptor& d);

/// Builds the entry; unknown, missing or malformed parameters throw
/// configuration errors, inadmissible values throw invalid_parameters.
CatalogEntry make_entry(const Descriptor& d);
CatalogEntry make_entry(const std::string& text);

std::vector<std::string> catalog_families();

/// Formats a double with the shortest decimal string that round-trips.
std::string format_number(double v);

enum class HyperbolicKind { geodesic_sphere, horosphere, equidistant, totally_geodesic };

CatalogEntry euclidean_cap(int n, double R, double rho, bool large = false, std::optional<double> zP = std::nullopt);
CatalogEntry flat_disk(int n, double rho, bool plane_P = false);
CatalogEntry tilted_disk(int n, double rho, double h, double tilt);
/// `param` is rho_c for geodesic spheres and d for equidistants; ignored otherwise.
CatalogEntry hyperbolic_cap(HyperbolicKind kind, int n, double param, double rho, bool large = false);
CatalogEntry spherical_cap(int n, double rho_c, double rho, bool large = false, bool hemisphere = false);
CatalogEntry spherical_disk(int n, double rho);
CatalogEntry tangent_graph(int n, double rho, double k);
CatalogEntry saddle_graph(int n, double rho);
/// Adds amp * bump(u) along the last axis (then projects back to the model).
/// The bump vanishes on the boundary, so P, D and the boundary are unchanged.
CatalogEntry perturbed(const CatalogEntry& base, double amp, std::uint64_t seed);

/// Volume of the unit k-sphere.
double unit_sphere_volume(int k);

}  // namespace newtonflux
