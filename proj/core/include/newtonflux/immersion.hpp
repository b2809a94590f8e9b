#pragma once

// Chart-parametrized hypersurfaces of a space form. The parameter domain is a
// box; by convention the boundary of the hypersurface is the face
// u_0 = hi_0 (radial coordinate of a polar chart), parametrized by the
// remaining coordinates t = (u_1, ..., u_{n-1}).

#include "newtonflux/ambient.hpp"
#include "newtonflux/symfun.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace newtonflux {

struct ParamBox {
  Vector lo;
  Vector hi;

  int dim() const noexcept { return static_cast<int>(lo.size()); }
  Vector center() const { return 0.5 * (lo + hi); }
  bool contains(const Vector& u, double margin = 0.0) const;
};

/// Position and first/second chart derivatives at one parameter point.
/// d1 is embed_dim x n (column i = psi_i); d2[i] is embed_dim x n
/// (column j = psi_ij).
struct ChartJet {
  Vector p;
  Matrix d1;
  std::vector<Matrix> d2;
};

using JetFunction = std::function<ChartJet(const Vector&)>;
using PositionFunction = std::function<Vector(const Vector&)>;

enum class DerivativeMode { analytic, finite_difference };

class Immersion {
 public:
  static constexpr double kDefaultFdStep = 1e-4;

  Immersion(AmbientSpace space, ParamBox domain, JetFunction jet, double orientation = 1.0);

  static Immersion from_position(AmbientSpace space, ParamBox domain, PositionFunction position,
                                 double fd_step = kDefaultFdStep, double orientation = 1.0);

  const AmbientSpace& space() const noexcept { return space_; }
  int n() const noexcept { return space_.n(); }
  const ParamBox& domain() const noexcept { return domain_; }
  DerivativeMode mode() const noexcept { return mode_; }
  double orientation() const noexcept { return orientation_; }

  Immersion reoriented(double sign) const;

  Vector position(const Vector& u) const;
  ChartJet jet(const Vector& u) const;
  /// Central-difference jet built from positions only.
  ChartJet fd_jet(const Vector& u, double h) const;

  /// Box of boundary parameters t (dimension n-1).
  ParamBox boundary_box() const;
  /// Chart point (hi_0, t) of the boundary parameter t.
  Vector boundary_chart_point(const Vector& t) const;

 private:
  AmbientSpace space_;
  ParamBox domain_;
  DerivativeMode mode_;
  JetFunction jet_;
  PositionFunction position_;
  double fd_step_ = kDefaultFdStep;
  double orientation_ = 1.0;
};

struct SurfaceFrame {
  Vector u;
  Vector p;
  Matrix tangents;  // embed_dim x n
  Vector N;
};

/// Unit vector orthogonal (model metric) to the columns of `rows` given as
/// the rows of a (m-1) x m matrix, via cofactor expansion. Throws
/// degenerate_immersion when the rows are dependent.
Vector generalized_normal(const AmbientSpace& space, const Matrix& rows);

SurfaceFrame evaluate_frame(const Immersion& imm, const Vector& u);

double min_singular_value(const Immersion& imm, const Vector& u);

struct CurvatureData {
  Vector u;
  Vector p;
  Vector N;
  Matrix tangents;  // psi_i as columns
  Matrix g;
  Matrix b;
  Matrix L;         // g = L L^T
  Matrix frame;     // orthonormal tangent frame E = tangents * L^{-T}
  Matrix A_frame;   // shape operator in `frame`
  Vector kappa;     // descending
  NewtonSeq newton;

  double S(int r) const;
  double H(int r) const;
  double sqrt_det_g() const;
  /// Contravariant chart components of T_r.
  Matrix T_chart(int r) const;
  /// Components of an ambient tangent vector in `frame`.
  Vector frame_coords(const AmbientSpace& space, const Vector& X) const;
  double T_form(const AmbientSpace& space, int r, const Vector& X, const Vector& Y) const;
  double A_form(const AmbientSpace& space, const Vector& X, const Vector& Y) const;
};

CurvatureData curvature_from_jet(const AmbientSpace& space, const ChartJet& jet,
                                 double orientation, const Vector& u);
CurvatureData curvature_at(const Immersion& imm, const Vector& u);

/// n(n-1)(c + H_2).
double scalar_curvature(const Immersion& imm, const Vector& u);

struct DivergenceResult {
  Vector covector;  // g-lowered chart components
  double norm = 0.0;
};

DivergenceResult newton_field_divergence(const Immersion& imm, const Vector& u, int r,
                                         double h = 1e-4);

struct RichardsonSummary {
  double max_norm_h = 0.0;
  double max_norm_half = 0.0;
  double slope = 0.0;        // log2 of the aggregated norm ratio
  int points_used = 0;       // points above the rounding floor
  int points_total = 0;
};

/// Aggregated order of decay of ||div T_r|| between steps h and h/2. Points
/// whose norm at step h is below `floor` are at rounding level and excluded
/// from the slope.
RichardsonSummary divergence_richardson(const Immersion& imm, const std::vector<Vector>& points,
                                        int r, double h = 1e-4, double floor = 1e-9);

}  // namespace newtonflux
