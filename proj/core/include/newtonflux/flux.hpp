#pragma once

// Flux identities for the Newton transformations of a hypersurface with
// boundary on P, and the curvature and volume estimates derived from them.

#include "newtonflux/ambient.hpp"
#include "newtonflux/boundary.hpp"
#include "newtonflux/quadrature.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace newtonflux {

struct QuadratureMeta {
  std::vector<int> orders;
  double refine_delta = 0.0;  // relative change of lhs/rhs under order doubling; -1 when not computed
  double refined_rel_residual = -1.0;  // rel_residual at the doubled order; -1 when not computed
};

struct FluxReport {
  std::string formula;
  int r = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;  // |lhs - rhs| / (1 + |lhs| + |rhs|)
  QuadratureMeta quadrature;
  std::string config;
  std::string field;
  std::vector<std::string> assumptions;
  std::vector<std::pair<std::string, double>> terms;  // intermediate integrals
};

struct FluxOptions {
  int order = 0;                    // 0 selects default_order(n)
  bool refine = true;               // also evaluate at doubled order
  double constancy_tolerance = 1e-6;
  double minimality_tolerance = 1e-8;
  std::string label;                // configuration descriptor for the report
};

struct HrStatistics {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int samples = 0;

  bool constant(double tol) const { return (max - min) < tol * (1.0 + std::abs(mean)); }
};

/// H_r over the quadrature nodes of M.
HrStatistics hr_statistics(const Immersion& M, int r, int order);

/// Boundary integral of <T_{r-1} nu, Y>.
double boundary_flux(const Immersion& M, const AmbientField& Y, int r, int order);

/// Integral over D of <Y, n_D>, n_D = -xi.
double domain_flux(const Configuration& config, const AmbientField& Y, int order);

/// Killing Y:  lhs = boundary flux,  rhs = -r C(n,r) H_r int_D <Y, n_D>.
FluxReport flux_killing(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options = {});

/// Conformal Y: rhs = r C(n,r) [int_M phi H_{r-1} - H_r int_D <Y,n_D> + (n+1) H_r eps int_Omega phi],
/// eps = +1 when N is the outward normal of Omega along M and -1 otherwise.
FluxReport flux_conformal(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options = {});

/// H_r = 0: rhs = r C(n,r) int_M phi H_{r-1}.
FluxReport flux_minimal(const Configuration& config, const AmbientField& Y, int r, const FluxOptions& options = {});

struct VolumeBound {
  double vol_M = 0.0;
  double vol_boundary = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool equality = false;
  double rho = 0.0;    // radius of the geodesic sphere P
  double rho0 = 0.0;   // spherical case: max distance from the center over M
};

VolumeBound volume_bound(const Configuration& config, const FluxOptions& options = {});

struct HrEstimate {
  int r = 0;
  double H_r = 0.0;  // sample mean
  double abs_Hr = 0.0;
  double bound = 0.0;           // weighted form; the tightest of the reported bounds
  double bound_general = 0.0;   // C / (n vol D) * boundary integral of |h_{r-1}|
  std::optional<double> bound_round;  // 1/rho^r, coth^r rho, cot^r rho for round boundaries
  double constant_C = 1.0;
  double slack = 0.0;
  double vol_D = 0.0;
  double boundary_h_integral = 0.0;
  std::optional<double> boundary_radius;
  int samples = 0;
};

HrEstimate hr_estimate(const Configuration& config, int r, const FluxOptions& options = {});

}  // namespace newtonflux
