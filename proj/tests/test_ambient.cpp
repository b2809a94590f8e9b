#include "newtonflux/ambient.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace newtonflux;
using Catch::Matchers::WithinAbs;

namespace {

Vector random_point(const AmbientSpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> G(0.0, 0.6);
  Vector v(space.embed_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = G(rng);
  switch (space.kind()) {
    case SpaceKind::euclidean: return v;
    case SpaceKind::spherical: return v / v.norm();
    case SpaceKind::hyperbolic:
      v(0) = std::sqrt(1.0 + v.tail(v.size() - 1).squaredNorm());
      return v;
  }
  return v;
}

Vector random_tangent(const AmbientSpace& space, const Vector& p, std::mt19937_64& rng) {
  std::normal_distribution<double> G(0.0, 1.0);
  Vector v(space.embed_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = G(rng);
  return space.project_tangent(p, v);
}

const SpaceKind kKinds[] = {SpaceKind::euclidean, SpaceKind::hyperbolic, SpaceKind::spherical};

}  // namespace

TEST_CASE("inner product signatures") {
  const AmbientSpace E(SpaceKind::euclidean, 2);
  const AmbientSpace H(SpaceKind::hyperbolic, 2);
  CHECK(E.embed_dim() == 3);
  CHECK(H.embed_dim() == 4);
  CHECK(E.curvature() == 0.0);
  CHECK(H.curvature() == -1.0);
  CHECK(AmbientSpace(SpaceKind::spherical, 2).curvature() == 1.0);
  CHECK(E.inner(E.axis(0), E.axis(0)) == 1.0);
  CHECK(H.inner(H.axis(0), H.axis(0)) == -1.0);
  Vector p(4);
  p << std::cosh(0.8), std::sinh(0.8), 0.0, 0.0;
  CHECK_THAT(H.inner(p, p), WithinAbs(-1.0, 1e-14));
  CHECK_THROWS_AS(E.inner(E.axis(0), H.axis(0)), Error);
}

TEST_CASE("project_tangent examples") {
  const AmbientSpace S(SpaceKind::spherical, 2);
  const Vector p = S.origin();
  CHECK(S.project_tangent(p, p).norm() < 1e-15);

  const AmbientSpace E(SpaceKind::euclidean, 2);
  Vector v(3);
  v << 1.0, -2.0, 3.5;
  CHECK((E.project_tangent(v, v) - v).norm() == 0.0);

  const AmbientSpace H(SpaceKind::hyperbolic, 2);
  Vector w = Vector::Zero(4);
  w << 1.0, 1.0, 0.0, 0.0;
  Vector expected = Vector::Zero(4);
  expected(1) = 1.0;
  CHECK((H.project_tangent(H.origin(), w) - expected).norm() < 1e-15);

  Vector off = S.origin() * 1.1;
  CHECK_THROWS_AS(S.project_tangent(off, w.head(4)), Error);
}

TEST_CASE("project_tangent is idempotent and self-adjoint") {
  std::mt19937_64 rng(5);
  for (SpaceKind kind : kKinds) {
    const AmbientSpace space(kind, 3);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector p = random_point(space, rng);
      std::normal_distribution<double> G(0.0, 1.0);
      Vector a(space.embed_dim()), b(space.embed_dim());
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        a(i) = G(rng);
        b(i) = G(rng);
      }
      const Vector pa = space.project_tangent(p, a);
      CHECK((space.project_tangent(p, pa) - pa).norm() < 1e-12 * (1.0 + pa.norm()));
      CHECK(std::abs(space.inner(pa, b) - space.inner(a, space.project_tangent(p, b))) < 1e-11 * (1.0 + a.norm() * b.norm() * p.squaredNorm()));
      if (kind != SpaceKind::euclidean) CHECK(std::abs(space.inner(pa, p)) < 1e-12 * (1.0 + pa.norm() * p.norm()));
    }
  }
}

TEST_CASE("geodesic distance examples and metric properties") {
  const AmbientSpace S(SpaceKind::spherical, 2);
  const Vector p = S.origin();
  CHECK(S.distance(p, p) == 0.0);
  CHECK_THAT(S.distance(p, -p), WithinAbs(std::numbers::pi, 1e-15));

  const AmbientSpace H(SpaceKind::hyperbolic, 2);
  Vector q = Vector::Zero(4);
  q << std::cosh(1.0), std::sinh(1.0), 0.0, 0.0;
  CHECK_THAT(H.distance(H.origin(), q), WithinAbs(1.0, 1e-12));

  std::mt19937_64 rng(7);
  for (SpaceKind kind : kKinds) {
    const AmbientSpace space(kind, 2);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector a = random_point(space, rng);
      const Vector b = random_point(space, rng);
      const Vector c = random_point(space, rng);
      CHECK(space.distance(a, a) == 0.0);
      CHECK(space.distance(a, b) == space.distance(b, a));
      CHECK(space.distance(a, c) <= space.distance(a, b) + space.distance(b, c) + 1e-12);
    }
  }
  CHECK_THROWS_AS(S.distance(p, 2.0 * p), Error);
}

TEST_CASE("geodesics stay on the model and have unit-speed distance") {
  std::mt19937_64 rng(9);
  for (SpaceKind kind : kKinds) {
    const AmbientSpace space(kind, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector p = random_point(space, rng);
      Vector u = random_tangent(space, p, rng);
      u /= space.norm(u);
      const Vector q = space.geodesic(p, u, 0.7);
      CHECK(space.on_model(q));
      CHECK_THAT(space.distance(p, q), WithinAbs(0.7, 1e-10));
    }
  }
}

TEST_CASE("ambient covariant derivative of a constant field vanishes") {
  const AmbientSpace E(SpaceKind::euclidean, 2);
  Vector c(3);
  c << 1.0, 2.0, 3.0;
  const Vector d = ambient_covariant(E, [&](const Vector&) { return c; }, Vector::Zero(3), E.axis(1));
  CHECK(d.norm() < 1e-12);
}

TEST_CASE("Killing and conformal equations hold at random tangent data") {
  std::mt19937_64 rng(13);
  for (SpaceKind kind : kKinds) {
    const AmbientSpace space(kind, 2);
    std::vector<AmbientField> fields;
    const int m = space.embed_dim();
    if (kind == SpaceKind::euclidean) {
      fields.push_back(AmbientField::translation(space, space.axis(m - 1)));
      fields.push_back(AmbientField::homothety(space, Vector::Zero(m)));
      fields.push_back(AmbientField::rotation(space, space.axis(0), space.axis(1)));
    } else {
      fields.push_back(AmbientField::rotation(space, space.axis(m - 1), space.origin()));
      fields.push_back(AmbientField::rotation(space, space.axis(1), space.axis(2)));
      fields.push_back(AmbientField::position_conformal(space, space.origin()));
    }
    for (const AmbientField& Y : fields) {
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        const Vector p = random_point(space, rng);
        const Vector u = random_tangent(space, p, rng);
        const Vector v = random_tangent(space, p, rng);
        worst = std::max(worst, conformal_residual(Y, p, u, v));
      }
      INFO(Y.describe());
      CHECK(worst < 1e-7);
      if (Y.is_killing()) CHECK(Y.conformal_factor(random_point(space, rng)) == 0.0);
    }
  }
}

TEST_CASE("conformal factors and field norms of position fields") {
  std::mt19937_64 rng(19);
  const AmbientSpace E(SpaceKind::euclidean, 2);
  CHECK(AmbientField::homothety(E, Vector::Zero(3)).conformal_factor(random_point(E, rng)) == 1.0);
  for (SpaceKind kind : {SpaceKind::hyperbolic, SpaceKind::spherical}) {
    const AmbientSpace space(kind, 3);
    const AmbientField Y = AmbientField::position_conformal(space, space.origin());
    for (int trial = 0; trial < 50; ++trial) {
      const Vector p = random_point(space, rng);
      const double d = space.distance(space.origin(), p);
      if (kind == SpaceKind::hyperbolic) {
        CHECK_THAT(Y.conformal_factor(p), WithinAbs(std::cosh(d), 1e-9 * std::cosh(d)));
        CHECK_THAT(space.norm(Y(p)), WithinAbs(std::sinh(d), 1e-9 * std::cosh(d)));
      } else {
        CHECK_THAT(Y.conformal_factor(p), WithinAbs(std::cos(d), 1e-9));
        CHECK_THAT(space.norm(Y(p)), WithinAbs(std::sin(d), 1e-9));
      }
      CHECK(std::abs(space.inner(Y(p), p)) < 1e-9 * (1.0 + p.squaredNorm()));
    }
  }
}

TEST_CASE("field constructors reject inadmissible kinds") {
  const AmbientSpace H(SpaceKind::hyperbolic, 2);
  CHECK_THROWS_AS(AmbientField::translation(H, H.axis(1)), Error);
  CHECK_THROWS_AS(AmbientField::homothety(H, H.origin()), Error);
}

TEST_CASE("renormalize projects onto the model") {
  const AmbientSpace S(SpaceKind::spherical, 2);
  Vector p = S.origin() * 1.3;
  CHECK(S.on_model(S.renormalize(p)));
  const AmbientSpace H(SpaceKind::hyperbolic, 2);
  Vector q(4);
  q << 2.0, 0.5, 0.1, 0.0;
  CHECK(H.on_model(H.renormalize(q)));
}
