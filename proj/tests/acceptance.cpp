// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "newtonflux/boundary.hpp"
#include "newtonflux/catalog.hpp"
#include "newtonflux/flux.hpp"
#include "newtonflux/symfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace newtonflux;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;
};

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> G(0.0, 1.0);
  std::uniform_real_distribution<double> S(-1.0, 1.0);
  const double scale = std::pow(10.0, S(rng));
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = scale * G(rng);
  return A;
}

std::vector<double> random_values(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> G(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = G(rng);
  return v;
}

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

Verdict cayley_hamilton() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> N(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = N(rng);
    const Matrix A = random_symmetric(n, rng);
    const NewtonSeq seq = newton_transforms(A);
    const double tol = 1e-9 * conditioning_scale(A);
    worst = std::max(worst, seq.T[static_cast<std::size_t>(n)].cwiseAbs().maxCoeff() / tol);
  }
  return {worst < 1.0, "trials=1000 max_ratio_to_tol=" + fmt("%.3e", worst)};
}

Verdict trace_identities_check() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> N(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = N(rng);
    const Matrix A = random_symmetric(n, rng);
    const NewtonSeq seq = newton_transforms(A);
    const TraceResiduals t = trace_identities(seq, A);
    worst = std::max(worst, std::max(t.trace_T, t.trace_AT) / conditioning_scale(A));
  }
  return {worst < 1e-10, "trials=1000 max_relative=" + fmt("%.3e", worst) + " tol=1e-10"};
}

Verdict binomial_shift() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> N(1, 8);
  std::normal_distribution<double> B(0.0, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = N(rng);
    const std::vector<double> alpha = random_values(n, rng);
    const double beta = B(rng);
    std::vector<double> gamma(alpha), magnitude(alpha);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      gamma[i] += beta;
      magnitude[i] = std::abs(alpha[i]) + std::abs(beta);
    }
    const SymCoeffs shifted = shifted_sym(alpha, beta);
    const SymCoeffs direct = elem_sym(gamma);
    const SymCoeffs scale = elem_sym(magnitude);
    for (int m = 0; m <= n; ++m) worst = std::max(worst, std::abs(shifted[m] - direct[m]) / std::max(1.0, scale[m]));
  }
  return {worst < 1e-12, "trials=1000 max_relative=" + fmt("%.3e", worst) + " tol=1e-12"};
}

Verdict bordered() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> N(1, 5);
  std::normal_distribution<double> G(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = N(rng);
    const std::vector<double> gamma = random_values(k, rng);
    const std::vector<double> off = random_values(k, rng);
    const double corner = G(rng);
    const Matrix A = bordered_matrix(gamma, off, corner);
    const SymmetricEigen eig = jacobi_eigen(A);
    const std::vector<double> kappa(eig.values.data(), eig.values.data() + eig.values.size());
    const SymCoeffs ref = elem_sym(kappa);
    const SymCoeffs got = bordered_invariants(gamma, off, corner);
    const double scale = conditioning_scale(A);
    for (int r = 0; r <= k + 1; ++r) worst = std::max(worst, std::abs(got[r] - ref[r]) / scale);
  }
  return {worst < 1e-9, "matrices=500 max_relative=" + fmt("%.3e", worst) + " tol=1e-9"};
}

Verdict boundary_identities() {
  const std::vector<std::string> caps = {
      "euclidean_cap:n=2,R=1,rho=1",
      "euclidean_cap:n=3,R=1,rho=1",
      "euclidean_cap:n=2,R=2,rho=1",
      "euclidean_cap:n=3,R=2,rho=1",
      "hyperbolic_cap:kind=geodesic_sphere,n=2,rho_c=1,rho=0.6",
      "hyperbolic_cap:kind=geodesic_sphere,n=3,rho_c=1,rho=0.6",
      "spherical_cap:n=2,rho_c=0.9,rho=0.6",
      "spherical_cap:n=3,rho_c=0.9,rho=0.6",
      "euclidean_cap:n=2,R=2,rho=1,zP=0.5",
      "euclidean_cap:n=3,R=2,rho=1,zP=0.5",
  };
  double worst = 0.0;
  int samples = 0;
  bool lambda_seen = false;
  for (const std::string& d : caps) {
    const CatalogEntry e = make_entry(d);
    for (const BoundaryFrame& f : boundary_frames(e.config, 8)) {
      if (f.lambda != 0.0) lambda_seen = true;
      const CurvatureData c = curvature_at(e.M(), f.u);
      for (int r = 1; r <= e.n() - 1; ++r) {
        worst = std::max(worst, identity_umbilic(e.space(), f, c, r).residual);
        ++samples;
      }
    }
  }
  return {worst < 1e-7 && lambda_seen,
          "configs=" + std::to_string(caps.size()) + " evaluations=" + std::to_string(samples) +
              " max_residual=" + fmt("%.3e", worst) + " tol=1e-7"};
}

Verdict divergence_free() {
  const std::vector<std::string> entries = {
      "euclidean_cap:n=2,R=2,rho=1",
      "euclidean_cap:n=3,R=2,rho=1",
      "hyperbolic_cap:kind=geodesic_sphere,n=2,rho_c=1,rho=0.6",
      "spherical_cap:n=2,rho_c=0.9,rho=0.6",
      "tilted_disk:n=2,rho=1,h=0.3,tilt=0.2",
      "perturbed_tangent_graph:n=2,rho=1,k=0.5,amp=0.05,seed=1",
      "perturbed_tangent_graph:n=3,rho=1,k=0.5,amp=0.05,seed=2",
      "perturbed_saddle_graph:n=2,rho=1,amp=0.05,seed=3",
      "perturbed_euclidean_cap:n=2,R=2,rho=1,amp=0.05,seed=4",
      "perturbed_hyperbolic_cap:kind=geodesic_sphere,n=2,rho_c=1,rho=0.6,amp=0.05,seed=5",
  };
  double worst_norm = 0.0;
  double min_slope = INFINITY;
  int measured = 0;
  bool perturbed_measured = true;
  for (const std::string& d : entries) {
    const CatalogEntry e = make_entry(d);
    const ParamBox& box = e.M().domain();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    std::vector<Vector> points;
    for (int k = 0; k < 10; ++k) {
      Vector u(box.dim());
      for (int i = 0; i < box.dim(); ++i) u(i) = box.lo(i) + U(rng) * (box.hi(i) - box.lo(i));
      points.push_back(u);
    }
    int used_here = 0;
    for (int r = 1; r <= e.n(); ++r) {
      const RichardsonSummary s = divergence_richardson(e.M(), points, r);
      worst_norm = std::max(worst_norm, s.max_norm_h);
      if (s.points_used > 0) {
        min_slope = std::min(min_slope, s.slope);
        ++measured;
        used_here += s.points_used;
      }
    }
    if (d.rfind("perturbed_", 0) == 0 && used_here == 0) perturbed_measured = false;
  }
  const bool pass = worst_norm < 1e-5 && measured > 0 && min_slope >= 1.9 && perturbed_measured;
  return {pass, "configs=" + std::to_string(entries.size()) + " max_norm=" + fmt("%.3e", worst_norm) +
                    " tol=1e-5 min_slope=" + fmt("%.3f", min_slope) + " measured_pairs=" + std::to_string(measured)};
}

Verdict flux_formulas() {
  const std::vector<std::string> constant = {
      "euclidean_cap:n=2,R=1,rho=1",
      "euclidean_cap:n=2,R=2,rho=1",
      "euclidean_cap:n=3,R=2,rho=1",
      "euclidean_cap:n=2,R=1.5,rho=1,large=1",
      "euclidean_cap:n=2,R=2,rho=1,zP=0.5",
      "flat_disk:n=2,rho=1",
      "tilted_disk:n=2,rho=1,h=0.3,tilt=0.2",
      "hyperbolic_cap:kind=geodesic_sphere,n=2,rho_c=1,rho=0.6",
      "hyperbolic_cap:kind=horosphere,n=2,rho=0.7",
      "hyperbolic_cap:kind=equidistant,n=2,d=0.4,rho=0.7",
      "hyperbolic_cap:kind=totally_geodesic,n=3,rho=0.6",
      "spherical_cap:n=2,rho_c=0.9,rho=0.6",
      "spherical_cap:n=3,rho_c=0.9,rho=0.6",
      "spherical_disk:n=2,rho=0.8",
  };
  double worst = 0.0, worst_refined = 0.0;
  int reports = 0;
  bool spaces[3] = {false, false, false};
  for (const std::string& d : constant) {
    const CatalogEntry e = make_entry(d);
    for (int r = 1; r <= std::min(2, e.n()); ++r) {
      for (const AmbientField& Y : e.killing_fields) {
        const FluxReport rep = flux_killing(e.config, Y, r);
        worst = std::max(worst, rep.rel_residual);
        worst_refined = std::max(worst_refined, rep.quadrature.refined_rel_residual);
        spaces[static_cast<int>(e.space().kind())] = true;
        ++reports;
      }
    }
  }
  const std::vector<std::string> caps = {
      "euclidean_cap:n=2,R=2,rho=1",
      "euclidean_cap:n=3,R=2,rho=1",
      "hyperbolic_cap:kind=geodesic_sphere,n=2,rho_c=1,rho=0.6",
      "hyperbolic_cap:kind=horosphere,n=2,rho=0.7",
      "spherical_cap:n=2,rho_c=0.9,rho=0.6",
  };
  double worst_conformal = 0.0;
  int conformal_reports = 0;
  for (const std::string& d : caps) {
    const CatalogEntry e = make_entry(d);
    for (int r = 1; r <= 2; ++r) {
      const FluxReport rep = flux_conformal(e.config, *e.conformal_field, r);
      worst_conformal = std::max(worst_conformal, rep.rel_residual);
      ++conformal_reports;
    }
  }
  const bool pass = worst < 1e-6 && worst_refined < 1e-8 && worst_conformal < 1e-6 && spaces[0] && spaces[1] && spaces[2];
  return {pass, "killing_reports=" + std::to_string(reports) + " max_rel=" + fmt("%.3e", worst) +
                    " max_rel_doubled=" + fmt("%.3e", worst_refined) + " conformal_reports=" +
                    std::to_string(conformal_reports) + " max_conformal_rel=" + fmt("%.3e", worst_conformal) +
                    " tol=1e-6/1e-8"};
}

Verdict minimal_flux() {
  const CatalogEntry e = flat_disk(2, 1.0);
  const FluxReport rep = flux_minimal(e.config, *e.conformal_field, 1);
  const double dl = std::abs(std::abs(rep.lhs) - 2.0 * kPi);
  const double dr = std::abs(std::abs(rep.rhs) - 2.0 * kPi);
  return {dl < 1e-8 && dr < 1e-8 && rep.lhs * rep.rhs > 0.0,
          "lhs=" + fmt("%.15g", rep.lhs) + " rhs=" + fmt("%.15g", rep.rhs) + " expected=2pi tol=1e-8"};
}

Verdict volume_bounds() {
  const VolumeBound flat = volume_bound(flat_disk(2, 1.0).config);
  const double flat_rel = std::abs(flat.vol_M - flat.bound) / flat.bound;
  const VolumeBound tilted = volume_bound(tilted_disk(2, 1.0, 0.3, 0.2).config);
  const VolumeBound hyp = volume_bound(hyperbolic_cap(HyperbolicKind::totally_geodesic, 2, 0.0, 0.8).config);
  const VolumeBound sph = volume_bound(spherical_disk(2, 0.8).config);
  const bool pass = flat_rel < 1e-7 && flat.equality && tilted.slack > 0.0 && !tilted.equality && hyp.slack > 0.0 &&
                    sph.slack > 0.0;
  return {pass, "flat_rel=" + fmt("%.3e", flat_rel) + " tilted_slack=" + fmt("%.4g", tilted.slack) +
                    " hyperbolic_slack=" + fmt("%.4g", hyp.slack) + " spherical_slack=" + fmt("%.4g", sph.slack)};
}

Verdict estimates() {
  constexpr double kRound = 1e-9;
  double worst_excess = -INFINITY;
  int evaluated = 0;
  const auto record = [&](const Configuration& config, int r) {
    const HrEstimate h = hr_estimate(config, r);
    worst_excess = std::max(worst_excess, h.abs_Hr - *h.bound_round);
    worst_excess = std::max(worst_excess, h.abs_Hr - h.bound);
    ++evaluated;
  };
  double hemisphere_gap = 0.0;
  for (int n : {2, 3}) {
    for (int r = 1; r <= n; ++r) {
      const HrEstimate h = hr_estimate(euclidean_cap(n, 1.0, 1.0).config, r);
      hemisphere_gap = std::max(hemisphere_gap, std::abs(h.abs_Hr - *h.bound_round));
    }
  }
  for (int k = 0; k < 20; ++k) {
    const double R = 1.0 + 0.2 * k;
    for (int r = 1; r <= 2; ++r) record(euclidean_cap(2, R, 1.0).config, r);
    record(euclidean_cap(3, R, 1.0).config, 1);
  }
  for (int k = 0; k < 20; ++k) {
    const double rho = 0.1 + 0.1 * k;
    for (int r = 1; r <= 2; ++r) {
      record(hyperbolic_cap(HyperbolicKind::geodesic_sphere, 2, rho, rho).config, r);
      record(hyperbolic_cap(HyperbolicKind::geodesic_sphere, 2, 1.5 * rho, rho).config, r);
      record(hyperbolic_cap(HyperbolicKind::horosphere, 2, 0.0, rho).config, r);
      record(hyperbolic_cap(HyperbolicKind::equidistant, 2, 0.5, rho).config, r);
    }
  }
  for (int k = 0; k < 20; ++k) {
    const double rho = 0.1 + 0.07 * k;
    for (int r = 1; r <= 2; ++r) {
      record(spherical_cap(2, rho, rho).config, r);
      record(spherical_cap(2, 1.5, rho).config, r);
    }
  }
  const bool pass = worst_excess <= kRound && hemisphere_gap < 1e-8;
  return {pass, "evaluations=" + std::to_string(evaluated) + " max(|H_r|-bound)=" + fmt("%.3e", worst_excess) +
                    " round_tol=1e-9 hemisphere_gap=" + fmt("%.3e", hemisphere_gap) + " tol=1e-8"};
}

Verdict negative_controls() {
  const CatalogEntry p = make_entry("perturbed_euclidean_cap:n=2,R=2,rho=1,amp=0.05,seed=1");
  bool gated = false;
  try {
    flux_killing(p.config, p.killing_fields.front(), 1);
  } catch (const Error& err) {
    gated = err.kind() == ErrorKind::precondition_violation;
  }
  const TransversalityReport t = transversality_report(tangent_graph(2, 1.0, 0.5).config, 1, 16, 4);
  return {gated && !t.transverse, std::string("precondition_gate=") + (gated ? "triggered" : "missed") +
                                      " tangent_min_abs_xi_nu=" + fmt("%.3e", t.min_abs_xi_nu) +
                                      " verdict=" + (t.transverse ? "transverse" : "non-transverse")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "cayley_hamilton", 5.0, cayley_hamilton},
      {2, "trace_identities", 0.0, trace_identities_check},
      {3, "binomial_shift", 0.0, binomial_shift},
      {4, "bordered_invariants", 0.0, bordered},
      {5, "boundary_identities", 30.0, boundary_identities},
      {6, "divergence_free", 0.0, divergence_free},
      {7, "flux_formulas", 0.0, flux_formulas},
      {8, "minimal_flux_flat_disk", 0.0, minimal_flux},
      {9, "volume_bounds", 0.0, volume_bounds},
      {10, "curvature_estimates", 60.0, estimates},
      {11, "negative_controls", 0.0, negative_controls},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && elapsed >= c.budget_s) {
      v.pass = false;
      v.detail += " over_budget";
    }
    std::ostringstream line;
    line << (v.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << ' ' << v.detail << " time=" << fmt("%.2f", elapsed)
         << 's';
    if (c.budget_s > 0.0) line << " budget=" << fmt("%.0f", c.budget_s) << 's';
    std::puts(line.str().c_str());
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
