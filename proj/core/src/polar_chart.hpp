#pragma once

// Building blocks for polar charts u = (s, alpha_0, ..., alpha_{n-2}):
// hyperspherical directions, surfaces of revolution, height perturbations and
// projection of a perturbed chart back onto a curved model.

#include "newtonflux/immersion.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace newtonflux::detail {

inline constexpr double kChartMargin = 1e-6;

/// Unit vector omega(alpha) in R^n and its first/second angular derivatives.
/// d1 is n x (n-1); d2[j] is n x (n-1) with column k = d^2 omega / da_j da_k.
struct Direction {
  Vector w;
  Matrix d1;
  std::vector<Matrix> d2;
};

Direction hyperspherical(const Vector& alpha, int n);

/// Polar parameter box: s in [s_lo, s_hi], polar angles in [eps, pi - eps],
/// azimuth in [0, 2 pi].
ParamBox polar_box(int n, double s_lo, double s_hi);

struct Profile {
  double a = 0.0, r = 0.0, z = 0.0;
  double da = 0.0, dr = 0.0, dz = 0.0;
  double dda = 0.0, ddr = 0.0, ddz = 0.0;
};

using ProfileFunction = std::function<Profile(double)>;

/// psi(s, alpha) = C + a(s) A + r(s) Q omega(alpha) + z(s) Z.
struct RevolutionFrame {
  Vector C;
  Vector A;
  Matrix Q;  // embed_dim x n
  Vector Z;
};

/// Standard frame of the catalog: A = e_0 (curved models) or 0, Q the
/// "horizontal" axes, Z the last axis.
RevolutionFrame standard_frame(const AmbientSpace& space);

JetFunction revolution_jet(RevolutionFrame frame, ProfileFunction profile);

struct HeightJet {
  double v = 0.0;
  Vector d;
  Matrix dd;
};

using HeightFunction = std::function<HeightJet(const Vector&)>;

/// F = psi + amplitude * h(u) * direction.
JetFunction add_height(JetFunction base, HeightFunction height, double amplitude, Vector direction);

/// G = F / sqrt(|<F,F>|) for the curved models (identity for euclidean).
JetFunction project_to_model(const AmbientSpace& space, JetFunction base);

/// (1 - (s/s_max)^2)(1 + s sum_k c_k omega_k): vanishes on the boundary.
HeightFunction bump_height(int n, double s_max, Vector coeffs);

/// Coefficients c_k in [-0.5, 0.5] drawn from a seeded mt19937_64.
Vector bump_coefficients(int n, std::uint64_t seed);

HeightFunction radial_height(std::function<Profile(double)> h);  // uses the z channel

/// s^2 (omega_0^2 - omega_1^2), i.e. x_1^2 - x_2^2 in polar form.
HeightFunction saddle_height(int n);

}  // namespace newtonflux::detail
