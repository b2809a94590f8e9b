#pragma once

// Space-form models embedded in a flat (or Lorentzian) coordinate space:
//   euclidean   R^{n+1}
//   hyperbolic  upper sheet of <x,x>_1 = -1 in R^{n+2}_1, signature (-,+,...,+)
//   spherical   unit sphere in R^{n+2}
// Coordinate 0 is the timelike axis of the hyperbolic model. The last
// coordinate is the "height" axis used by the catalog's reference hyperplane.

#include "newtonflux/types.hpp"

#include <functional>
#include <string>

namespace newtonflux {

enum class SpaceKind { euclidean, hyperbolic, spherical };

const char* to_string(SpaceKind kind) noexcept;

class AmbientSpace {
 public:
  static constexpr double kOnModelTolerance = 1e-8;

  AmbientSpace(SpaceKind kind, int n);

  SpaceKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  int embed_dim() const noexcept { return kind_ == SpaceKind::euclidean ? n_ + 1 : n_ + 2; }
  double curvature() const noexcept;
  const Vector& signature() const noexcept { return signature_; }

  double inner(const Vector& u, const Vector& v) const;
  double norm(const Vector& v) const;  // sqrt(|<v,v>|)

  /// Distance of p from the model surface, |<p,p> -/+ 1|; zero for euclidean.
  double model_defect(const Vector& p) const;
  bool on_model(const Vector& p, double tol = kOnModelTolerance) const;
  void require_on_model(const Vector& p, const char* where) const;
  /// Rescales p back onto the model surface.
  Vector renormalize(const Vector& p) const;

  Vector project_tangent(const Vector& p, const Vector& v) const;

  /// Point at parameter t on the geodesic through p with initial velocity u.
  Vector geodesic(const Vector& p, const Vector& u, double t) const;

  double distance(const Vector& p, const Vector& q) const;

  /// The basis vector e_k of the embedding space.
  Vector axis(int k) const;
  /// Base point of the model: the origin (euclidean) or e_0 (curved models).
  Vector origin() const;

 private:
  void check_dim(const Vector& v, const char* where) const;

  SpaceKind kind_;
  int n_;
  Vector signature_;
};

inline double inner(const AmbientSpace& space, const Vector& u, const Vector& v) {
  return space.inner(u, v);
}
inline Vector project_tangent(const AmbientSpace& space, const Vector& p, const Vector& v) {
  return space.project_tangent(p, v);
}
inline double geodesic_distance(const AmbientSpace& space, const Vector& p, const Vector& q) {
  return space.distance(p, q);
}

using VectorField = std::function<Vector(const Vector&)>;

/// Covariant derivative of an ambient vector field along u at p, by a central
/// difference along the geodesic through p with velocity u, projected to T_p.
Vector ambient_covariant(const AmbientSpace& space, const VectorField& field,
                         const Vector& p, const Vector& u, double h = 1e-5);

enum class FieldKind { translation, rotation, homothety, position_conformal };

const char* to_string(FieldKind kind) noexcept;

/// Killing and conformal fields with closed-form conformal factor phi:
///   translation         Y = a                               (euclidean)      phi = 0
///   rotation            Y = <p,a> b - <p,b> a               (all models)     phi = 0
///   homothety           Y = p - a                           (euclidean)      phi = 1
///   position_conformal  Y = -a - <a,p> p  /  Y = -a + <a,p> p (hyp / sph)    phi = -<a,p> / <a,p>
/// Inner products are those of the model; in the curved models the rotation
/// field with b = e_last and a on P is the Killing field orthogonal to P.
class AmbientField {
 public:
  static AmbientField translation(const AmbientSpace& space, const Vector& a);
  static AmbientField rotation(const AmbientSpace& space, const Vector& a, const Vector& b);
  static AmbientField homothety(const AmbientSpace& space, const Vector& center);
  static AmbientField position_conformal(const AmbientSpace& space, const Vector& a);

  const AmbientSpace& space() const noexcept { return space_; }
  FieldKind kind() const noexcept { return kind_; }
  bool is_killing() const noexcept {
    return kind_ == FieldKind::translation || kind_ == FieldKind::rotation;
  }
  const Vector& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }

  Vector operator()(const Vector& p) const;
  double conformal_factor(const Vector& p) const;

  std::string describe() const;

 private:
  AmbientField(AmbientSpace space, FieldKind kind, Vector a, Vector b);

  AmbientSpace space_;
  FieldKind kind_;
  Vector a_;
  Vector b_;
};

/// |<D_u Y, v> + <u, D_v Y> - 2 phi(p) <u, v>| with finite-difference D.
double conformal_residual(const AmbientField& field, const Vector& p,
                          const Vector& u, const Vector& v, double h = 1e-5);

}  // namespace newtonflux
