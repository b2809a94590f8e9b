#include "newtonflux/catalog.hpp"
#include "newtonflux/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

using namespace newtonflux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

double one(const Vector&, const Vector&) { return 1.0; }

RegionSpec box_region(int dim, double lo, double hi) {
  RegionSpec spec;
  spec.kind = RegionKind::disk_D;
  spec.box.lo = Vector::Constant(dim, lo);
  spec.box.hi = Vector::Constant(dim, hi);
  spec.sample = [](const Vector& u) { return RegionSample{u, 1.0}; };
  return spec;
}

}  // namespace

TEST_CASE("Gauss-Legendre weights and symmetry") {
  for (int order : {1, 2, 5, 16, 32, 64}) {
    const GaussLegendre g = GaussLegendre::make(order);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(order));
    CHECK_THAT(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), WithinAbs(2.0, 1e-13));
    CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    for (int i = 0; i < order; ++i) {
      CHECK(g.nodes[i] == -g.nodes[order - 1 - i]);
      CHECK(g.weights[i] > 0.0);
    }
  }
  CHECK_THROWS_AS(GaussLegendre::make(0), Error);
}

TEST_CASE("Gauss-Legendre is exact up to degree 2k-1") {
  for (int order : {3, 6, 11}) {
    const GaussLegendre g = GaussLegendre::make(order);
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK_THAT(s, WithinAbs(exact, 1e-13));
    }
  }
}

TEST_CASE("tensor rules integrate box polynomials") {
  const RegionSpec box = box_region(3, 0.0, 2.0);
  const double v = integrate(box, [](const Vector& u, const Vector&) { return u(0) * u(1) * u(1) * u(2) * u(2) * u(2); },
                             TensorRule::with_orders({2, 3, 4}));
  CHECK_THAT(v, WithinRel(2.0 * (8.0 / 3.0) * 4.0, 1e-13));
  CHECK(TensorRule::uniform(3, 4).size() == 64u);
  CHECK(TensorRule::with_orders({2, 5}).orders() == std::vector<int>{2, 5});
  CHECK(rule_nodes(box.box, TensorRule::uniform(3, 2)).size() == 8u);
  CHECK(default_order(2) == 32);
  CHECK(default_order(4) == 16);
}

TEST_CASE("pairwise_sum is deterministic and accurate") {
  std::vector<double> v(1000, 0.1);
  CHECK_THAT(pairwise_sum(v), WithinAbs(100.0, 1e-12));
  CHECK(pairwise_sum(v) == pairwise_sum(v));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("non-finite integrands are reported") {
  const RegionSpec box = box_region(1, 0.0, 1.0);
  try {
    integrate(box, [](const Vector&, const Vector&) { return std::nan(""); }, 4);
    FAIL("expected integration error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::integration);
  }
}

TEST_CASE("surface and boundary measures of catalog entries") {
  SECTION("euclidean hemisphere") {
    const CatalogEntry e = euclidean_cap(2, 1.0, 1.0);
    CHECK_THAT(integrate(surface_region(e.M()), one, 32), WithinRel(2.0 * kPi, 1e-10));
    CHECK_THAT(integrate(boundary_region(e.M()), one, 32), WithinRel(2.0 * kPi, 1e-12));
  }
  SECTION("hyperbolic geodesic disk") {
    const double rho = 0.9;
    const CatalogEntry e = hyperbolic_cap(HyperbolicKind::totally_geodesic, 2, 0.0, rho);
    CHECK_THAT(integrate(surface_region(e.M()), one, 32), WithinRel(2.0 * kPi * (std::cosh(rho) - 1.0), 1e-10));
    CHECK_THAT(integrate(boundary_region(e.M()), one, 32), WithinRel(2.0 * kPi * std::sinh(rho), 1e-12));
  }
  SECTION("references of every base family") {
    for (const char* d : {"euclidean_cap:n=3,R=2,rho=1", "flat_disk:n=2,rho=1.3", "spherical_cap:n=2,rho_c=0.7,rho=0.5",
                          "hyperbolic_cap:kind=horosphere,n=2,rho=0.8", "spherical_disk:n=3,rho=1"}) {
      const CatalogEntry e = make_entry(d);
      const int o = default_order(e.n());
      INFO(d);
      if (e.ref.vol_M) CHECK_THAT(integrate(surface_region(e.M()), one, o), WithinRel(*e.ref.vol_M, 1e-9));
      if (e.ref.vol_boundary) CHECK_THAT(integrate(boundary_region(e.M()), one, o), WithinRel(*e.ref.vol_boundary, 1e-9));
      if (e.ref.vol_D && e.config.D) {
        CHECK_THAT(integrate(surface_region(*e.config.D, RegionKind::disk_D), one, o), WithinRel(*e.ref.vol_D, 1e-9));
      }
    }
  }
}

TEST_CASE("solid regions") {
  SECTION("euclidean half ball") {
    const CatalogEntry e = euclidean_cap(2, 1.0, 1.0);
    const SolidTerms s = solid_volume_terms(cone_region(e.M(), e.config.apex), [](const Vector&) { return 1.0; },
                                            TensorRule::uniform(3, 16));
    CHECK_THAT(s.volume, WithinRel(2.0 * kPi / 3.0, 1e-12));
    CHECK_THAT(s.phi_integral, WithinRel(s.volume, 1e-15));
  }
  SECTION("spherical half geodesic ball") {
    const double rho = 0.8;
    const AmbientSpace S(SpaceKind::spherical, 2);
    const CatalogEntry e = spherical_disk(2, rho);
    REQUIRE(e.config.D);
    const SolidTerms s = solid_volume_terms(cone_region(*e.config.D, S.origin()), [](const Vector&) { return 1.0; },
                                            TensorRule::uniform(3, 24));
    CHECK_THAT(s.volume, WithinRel(kPi * (rho - std::sin(rho) * std::cos(rho)), 1e-10));
  }
  SECTION("wrong region kind") {
    const CatalogEntry e = euclidean_cap(2, 1.0, 1.0);
    CHECK_THROWS_AS(solid_volume_terms(surface_region(e.M()), [](const Vector&) { return 1.0; }, TensorRule::uniform(2, 4)),
                    Error);
  }
}

TEST_CASE("boundary integrals match the divergence theorem on a disk") {
  const CatalogEntry e = flat_disk(2, 1.0);
  const Immersion& D = e.M();
  const double area = integrate(surface_region(D), [](const Vector&, const Vector&) { return 2.0; }, 32);
  const double flux = integrate(boundary_region(D), [](const Vector&, const Vector& x) { return std::hypot(x(0), x(1)); }, 32);
  CHECK_THAT(area, WithinRel(flux, 1e-12));
}

TEST_CASE("order doubling converges") {
  const CatalogEntry e = euclidean_cap(2, 1.3, 1.0);
  const auto f = [](const Vector&, const Vector& x) { return std::exp(x(0)) * std::cos(x(2)); };
  const double a = integrate(surface_region(e.M()), f, 8);
  const double b = integrate(surface_region(e.M()), f, 16);
  const double c = integrate(surface_region(e.M()), f, 32);
  CHECK(std::abs(c - b) < std::abs(b - a));
  CHECK(std::abs(c - b) < 1e-10 * std::abs(c));
}
