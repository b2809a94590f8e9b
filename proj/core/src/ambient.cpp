#include "newtonflux/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace newtonflux {

const char* to_string(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::hyperbolic: return "hyperbolic";
    case SpaceKind::spherical: return "spherical";
  }
  return "unknown";
}

const char* to_string(FieldKind kind) noexcept {
  switch (kind) {
    case FieldKind::translation: return "translation";
    case FieldKind::rotation: return "rotation";
    case FieldKind::homothety: return "homothety";
    case FieldKind::position_conformal: return "position_conformal";
  }
  return "unknown";
}

AmbientSpace::AmbientSpace(SpaceKind kind, int n) : kind_(kind), n_(n) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "AmbientSpace: n must be >= 1");
  signature_ = Vector::Ones(embed_dim());
  if (kind_ == SpaceKind::hyperbolic) signature_(0) = -1.0;
}

double AmbientSpace::curvature() const noexcept {
  switch (kind_) {
    case SpaceKind::euclidean: return 0.0;
    case SpaceKind::hyperbolic: return -1.0;
    case SpaceKind::spherical: return 1.0;
  }
  return 0.0;
}

void AmbientSpace::check_dim(const Vector& v, const char* where) const {
  if (v.size() != embed_dim()) {
    std::ostringstream os;
    os << where << ": expected a vector of length " << embed_dim() << ", got " << v.size();
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

double AmbientSpace::inner(const Vector& u, const Vector& v) const {
  check_dim(u, "inner");
  check_dim(v, "inner");
  return (signature_.array() * u.array() * v.array()).sum();
}

double AmbientSpace::norm(const Vector& v) const { return std::sqrt(std::abs(inner(v, v))); }

double AmbientSpace::model_defect(const Vector& p) const {
  check_dim(p, "model_defect");
  switch (kind_) {
    case SpaceKind::euclidean: return 0.0;
    case SpaceKind::hyperbolic: {
      const double d = std::abs(inner(p, p) + 1.0);
      return p(0) > 0.0 ? d : std::max(d, 1.0);
    }
    case SpaceKind::spherical: return std::abs(inner(p, p) - 1.0);
  }
  return 0.0;
}

bool AmbientSpace::on_model(const Vector& p, double tol) const { return model_defect(p) <= tol; }

void AmbientSpace::require_on_model(const Vector& p, const char* where) const {
  if (!on_model(p)) {
    std::ostringstream os;
    os << where << ": point is off the " << to_string(kind_) << " model (defect "
       << model_defect(p) << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

Vector AmbientSpace::renormalize(const Vector& p) const {
  check_dim(p, "renormalize");
  switch (kind_) {
    case SpaceKind::euclidean: return p;
    case SpaceKind::spherical: return p / p.norm();
    case SpaceKind::hyperbolic: {
      const double q = -inner(p, p);
      if (q <= 0.0 || p(0) <= 0.0) {
        throw Error(ErrorKind::invalid_input, "renormalize: vector is not future timelike");
      }
      return p / std::sqrt(q);
    }
  }
  return p;
}

Vector AmbientSpace::project_tangent(const Vector& p, const Vector& v) const {
  check_dim(v, "project_tangent");
  switch (kind_) {
    case SpaceKind::euclidean: return v;
    case SpaceKind::spherical:
      require_on_model(p, "project_tangent");
      return v - inner(v, p) * p;
    case SpaceKind::hyperbolic:
      require_on_model(p, "project_tangent");
      return v + inner(v, p) * p;
  }
  return v;
}

Vector AmbientSpace::geodesic(const Vector& p, const Vector& u, double t) const {
  const double speed = norm(u);
  if (kind_ == SpaceKind::euclidean || speed == 0.0) return p + t * u;
  const double a = speed * t;
  if (kind_ == SpaceKind::spherical) return std::cos(a) * p + std::sin(a) / speed * u;
  return std::cosh(a) * p + std::sinh(a) / speed * u;
}

double AmbientSpace::distance(const Vector& p, const Vector& q) const {
  require_on_model(p, "geodesic_distance");
  require_on_model(q, "geodesic_distance");
  switch (kind_) {
    case SpaceKind::euclidean: return (p - q).norm();
    case SpaceKind::spherical:
      // Chordal forms stay accurate for nearby and antipodal points.
      return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
    case SpaceKind::hyperbolic: {
      const double chord2 = std::max(0.0, inner(p - q, p - q));
      return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
    }
  }
  return 0.0;
}

Vector AmbientSpace::axis(int k) const {
  if (k < 0 || k >= embed_dim()) throw Error(ErrorKind::invalid_input, "axis: index out of range");
  Vector e = Vector::Zero(embed_dim());
  e(k) = 1.0;
  return e;
}

Vector AmbientSpace::origin() const {
  return kind_ == SpaceKind::euclidean ? Vector(Vector::Zero(embed_dim())) : axis(0);
}

Vector ambient_covariant(const AmbientSpace& space, const VectorField& field,
                         const Vector& p, const Vector& u, double h) {
  const Vector forward = field(space.geodesic(p, u, h));
  const Vector backward = field(space.geodesic(p, u, -h));
  return space.project_tangent(p, (forward - backward) / (2.0 * h));
}

AmbientField::AmbientField(AmbientSpace space, FieldKind kind, Vector a, Vector b)
    : space_(std::move(space)), kind_(kind), a_(std::move(a)), b_(std::move(b)) {}

AmbientField AmbientField::translation(const AmbientSpace& space, const Vector& a) {
  if (space.kind() != SpaceKind::euclidean) {
    throw Error(ErrorKind::invalid_input, "translation fields exist only in euclidean space");
  }
  if (a.size() != space.embed_dim()) throw Error(ErrorKind::invalid_input, "translation: bad length");
  return AmbientField(space, FieldKind::translation, a, Vector::Zero(space.embed_dim()));
}

AmbientField AmbientField::rotation(const AmbientSpace& space, const Vector& a, const Vector& b) {
  if (a.size() != space.embed_dim() || b.size() != space.embed_dim()) {
    throw Error(ErrorKind::invalid_input, "rotation: bad length");
  }
  return AmbientField(space, FieldKind::rotation, a, b);
}

AmbientField AmbientField::homothety(const AmbientSpace& space, const Vector& center) {
  if (space.kind() != SpaceKind::euclidean) {
    throw Error(ErrorKind::invalid_input, "homothetic (non-Killing) fields exist only in euclidean space");
  }
  if (center.size() != space.embed_dim()) throw Error(ErrorKind::invalid_input, "homothety: bad length");
  return AmbientField(space, FieldKind::homothety, center, Vector::Zero(space.embed_dim()));
}

AmbientField AmbientField::position_conformal(const AmbientSpace& space, const Vector& a) {
  if (space.kind() == SpaceKind::euclidean) return homothety(space, a);
  space.require_on_model(a, "position_conformal");
  return AmbientField(space, FieldKind::position_conformal, a, Vector::Zero(space.embed_dim()));
}

Vector AmbientField::operator()(const Vector& p) const {
  switch (kind_) {
    case FieldKind::translation: return a_;
    case FieldKind::rotation: return space_.inner(p, a_) * b_ - space_.inner(p, b_) * a_;
    case FieldKind::homothety: return p - a_;
    case FieldKind::position_conformal: {
      const double ap = space_.inner(a_, p);
      if (space_.kind() == SpaceKind::hyperbolic) return -a_ - ap * p;
      return -a_ + ap * p;
    }
  }
  return Vector::Zero(space_.embed_dim());
}

double AmbientField::conformal_factor(const Vector& p) const {
  switch (kind_) {
    case FieldKind::translation:
    case FieldKind::rotation: return 0.0;
    case FieldKind::homothety: return 1.0;
    case FieldKind::position_conformal: {
      const double ap = space_.inner(a_, p);
      return space_.kind() == SpaceKind::hyperbolic ? -ap : ap;
    }
  }
  return 0.0;
}

std::string AmbientField::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(space_.kind()) << '/' << to_string(kind_) << " a=[";
  for (Eigen::Index i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_(i);
  os << ']';
  if (kind_ == FieldKind::rotation) {
    os << " b=[";
    for (Eigen::Index i = 0; i < b_.size(); ++i) os << (i ? "," : "") << b_(i);
    os << ']';
  }
  return os.str();
}

double conformal_residual(const AmbientField& field, const Vector& p,
                          const Vector& u, const Vector& v, double h) {
  const AmbientSpace& space = field.space();
  const VectorField Y = [&field](const Vector& x) { return field(x); };
  const Vector Du = ambient_covariant(space, Y, p, u, h);
  const Vector Dv = ambient_covariant(space, Y, p, v, h);
  return std::abs(space.inner(Du, v) + space.inner(u, Dv) -
                  2.0 * field.conformal_factor(p) * space.inner(u, v));
}

}  // namespace newtonflux
