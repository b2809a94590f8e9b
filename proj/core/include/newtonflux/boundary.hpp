#pragma once

// Boundary geometry of a hypersurface M whose boundary Sigma lies on a
// reference hypersurface P: conormal nu, normals xi (of P) and eta (of Sigma
// in P), principal curvatures tau_i of Sigma in P, and the pointwise
// identities linking them to the Newton transformations of M.

#include "newtonflux/immersion.hpp"
#include "newtonflux/quadrature.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace newtonflux {

enum class PKind { affine_section, euclidean_sphere };

/// Totally geodesic or totally umbilic reference hypersurface.
///   affine_section(m, k):   {x on the model : <x, m> = k}
///   euclidean_sphere(c, R): {x : |x - c| = R} in euclidean space
class PSurface {
 public:
  static PSurface affine_section(const AmbientSpace& space, const Vector& m, double k);
  static PSurface euclidean_sphere(const AmbientSpace& space, const Vector& center, double radius);
  /// Geodesic sphere of radius rho about a point of a curved model, or a
  /// round sphere in euclidean space.
  static PSurface geodesic_sphere(const AmbientSpace& space, const Vector& center, double rho);

  PKind kind() const noexcept { return kind_; }
  const AmbientSpace& space() const noexcept { return space_; }

  /// Unit normal xi_P at p: the tangent projection of m for affine sections
  /// (toward the center of a curved geodesic sphere), away from the center
  /// for euclidean spheres.
  Vector normal(const Vector& p) const;
  /// Umbilicity factor with respect to normal(): A_P = lambda_P Id.
  double umbilicity() const noexcept { return lambda_; }
  bool totally_geodesic() const noexcept { return lambda_ == 0.0; }
  double residual(const Vector& p) const;

  /// Center and radius when P is a geodesic sphere of the ambient.
  std::optional<std::pair<Vector, double>> as_geodesic_sphere() const;

  std::string describe() const;

 private:
  PSurface(AmbientSpace space, PKind kind, Vector m, double k);

  AmbientSpace space_;
  PKind kind_;
  Vector m_;
  double k_;
  double scale_ = 1.0;
  double lambda_ = 0.0;
};

/// M with its boundary on P. D is the domain of P bounded by the boundary of
/// M, charted so that D(hi_0, t) = M(hi_0, t); the radial direction of its
/// chart is outward from D. `apex` is the center of D.
struct Configuration {
  Immersion M;
  std::optional<Immersion> D;
  std::optional<PSurface> P;
  Vector apex;
};

struct BoundaryFrame {
  Vector t;
  Vector u;
  Vector p;
  Vector N;
  Vector nu;
  Vector xi;
  Vector eta;
  Vector tau;      // descending
  Matrix e;        // embed_dim x (n-1), principal directions of Sigma in P
  Matrix sigma_tangents;
  double lambda = 0.0;
  double xi_sign = 1.0;  // xi = xi_sign * xi_P
};

BoundaryFrame build_frame(const Configuration& config, const Vector& t);

/// Frames at the boundary nodes of a tensor rule, with principal directions
/// aligned between consecutive nodes.
std::vector<BoundaryFrame> boundary_frames(const Configuration& config, int order);

/// Reorders and re-signs principal directions within groups of equal tau so
/// that they vary continuously along the sequence.
void align_frames(std::vector<BoundaryFrame>& frames, double tie_tolerance = 1e-8);

/// Rejects configurations where M lies inside P (no transversal direction).
void validate_configuration(const Configuration& config);

struct FrameResiduals {
  double nueta = 0.0;         // |<eta,nu> - <xi,N>| + |<eta,N> + <xi,nu>|
  double xi_span = 0.0;       // |<xi,nu>^2 + <xi,N>^2 - 1|
  double unit = 0.0;          // max deviation of |nu|,|N|,|xi|,|eta| from 1
  double orthogonality = 0.0; // max |<nu,T dM>|,|<nu,N>|,|<eta,T Sigma>|,|<eta,xi>|
};

FrameResiduals frame_residuals(const AmbientSpace& space, const BoundaryFrame& frame);

struct IdentityValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
};

/// <T_r nu, nu> against sum_j (-1)^j C(n-1-j, r-j) lambda^{r-j} <xi,N>^{r-j} <xi,nu>^j s_j(tau).
IdentityValue identity_umbilic(const AmbientSpace& space, const BoundaryFrame& frame,
                               const CurvatureData& curv, int r);

/// S_r of M against the bordered expansion with gamma_i = -tau_i <xi,nu> + lambda <xi,N>,
/// off-diagonal <A nu, e_i> and corner <A nu, nu>.
IdentityValue identity_Sr(const AmbientSpace& space, const BoundaryFrame& frame,
                          const CurvatureData& curv, int r);

/// max_ij |<A e_i, e_j> + tau_i delta_ij <xi,nu> - lambda <xi,N> delta_ij|.
double formaA2_residual(const AmbientSpace& space, const BoundaryFrame& frame, const CurvatureData& curv);

/// max_r |S_r - bordered_invariants(<A e_i,e_i>, <A nu,e_i>, <A nu,nu>)_r|.
double bordered_residual(const AmbientSpace& space, const BoundaryFrame& frame, const CurvatureData& curv);

struct TransversalityReport {
  double min_abs_xi_nu = 0.0;
  double min_T_eigenvalue = 0.0;
  double min_S2 = 0.0;
  double min_abs_Sn = 0.0;
  double threshold = 1e-6;
  bool transverse = false;
  int boundary_samples = 0;
  int interior_samples = 0;
};

TransversalityReport transversality_report(const Configuration& config, int r, int boundary_order,
                                           int interior_order, double threshold = 1e-6);

struct EllipticScan {
  bool found = false;
  Vector u;
  double margin = 0.0;   // min_i |kappa_i| at the reported point
  int points_scanned = 0;
};

/// Scans a uniform interior grid (cell midpoints, `resolution` per axis) for a
/// point where all principal curvatures are nonzero with one sign.
EllipticScan elliptic_point_scan(const Immersion& imm, int resolution);

}  // namespace newtonflux
