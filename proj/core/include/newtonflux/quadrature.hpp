#pragma once

// Tensor-product Gauss-Legendre integration over parameter boxes of the
// hypersurface M, its boundary, the spanning domain D and the solid region.

#include "newtonflux/immersion.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace newtonflux {

struct GaussLegendre {
  int order = 0;
  std::vector<double> nodes;    // ascending, in [-1, 1]
  std::vector<double> weights;

  static GaussLegendre make(int order);
};

struct TensorRule {
  std::vector<GaussLegendre> axes;

  static TensorRule uniform(int dim, int order);
  static TensorRule with_orders(const std::vector<int>& orders);
  int dim() const noexcept { return static_cast<int>(axes.size()); }
  std::vector<int> orders() const;
  std::size_t size() const;
};

/// 32 points per axis for n <= 2, 16 for n = 3 and above.
int default_order(int n) noexcept;

enum class RegionKind { surface_M, boundary_dM, disk_D, solid_Omega };

const char* to_string(RegionKind kind) noexcept;

struct RegionSample {
  Vector x;
  double measure = 0.0;  // volume element; signed for solid regions
};

struct RegionSpec {
  RegionKind kind = RegionKind::surface_M;
  ParamBox box;
  std::function<RegionSample(const Vector&)> sample;
};

using Integrand = std::function<double(const Vector& u, const Vector& x)>;

/// Sum of `values` by recursive halving; the order of operations depends only
/// on the length.
double pairwise_sum(std::span<const double> values);

/// Nodes of `rule` mapped into `box`, last axis varying fastest.
std::vector<Vector> rule_nodes(const ParamBox& box, const TensorRule& rule);

double integrate(const RegionSpec& region, const Integrand& f, const TensorRule& rule);
double integrate(const RegionSpec& region, const Integrand& f, int order);

/// M or D over its chart box with measure sqrt(det g).
RegionSpec surface_region(const Immersion& imm, RegionKind kind = RegionKind::surface_M);
/// The face u_0 = hi_0, parametrized by t, with the induced measure.
RegionSpec boundary_region(const Immersion& imm);
/// Cone x(tau, u) from `apex` over the image of `imm`, tau in [0, 1],
/// geodesically rescaled in the curved models.
RegionSpec cone_region(const Immersion& imm, const Vector& apex);

struct SolidTerms {
  double volume = 0.0;
  double phi_integral = 0.0;
  int chart_orientation = 1;  // sign of the cone chart's volume element
};

/// vol(Omega) and the integral of phi over Omega. The volume element must
/// keep one sign over all nodes (star-shaped region); otherwise throws
/// unsupported_region.
SolidTerms solid_volume_terms(const RegionSpec& omega, const std::function<double(const Vector&)>& phi,
                              const TensorRule& rule);

}  // namespace newtonflux
