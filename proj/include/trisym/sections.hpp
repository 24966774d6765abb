#pragma once

#include "trisym/adhm.hpp"
#include "trisym/trisymplectic.hpp"

namespace trisym {

// Twistor section sigma(z,w) = z X1 + w X2 of the flat space B(r,c).
struct ADHMSection {
  ADHMData X1, X2;

  ADHMSection(ADHMData x1, ADHMData x2);
  Index r() const { return X1.r; }
  Index c() const { return X1.c; }
};

// Point of the twistor sphere: stereographic parameter or infinity.
// zeta = 0 is the complex structure I, 1 is J, i is K.
struct SpherePoint {
  Complex zeta{0.0, 0.0};
  bool infinite = false;

  static SpherePoint at(Complex z) { return {z, false}; }
  static SpherePoint infinity() { return {Complex(0, 0), true}; }
};

// (a, b, c) = ((1-|z|^2), 2 Re z, 2 Im z)/(1+|z|^2); infinity -> (-1,0,0).
std::array<double, 3> sphere_convention(const SpherePoint& p);

// z X1 + w X2 after normalizing |z|^2+|w|^2 = 1; throws on (0,0).
ADHMData section_eval(const ADHMSection& s, Complex z, Complex w);
ADHMData section_eval(const ADHMSection& s, const SpherePoint& p);

struct MomentValue {
  CMatrix m1, m2, m3;  // z^2, w^2, zw coefficients of mu_c along the section
  double norm() const;
};

MomentValue tri_moment(const ADHMSection& s);

struct GlobalRegularityReport {
  bool flag = false;
  double worst_margin = 0.0;
  bool exact_certificate = false;             // c = 1 pencil certificate used
  std::vector<std::array<Complex, 2>> witnesses;  // [z:w] of failures
};

// Regularity at [1:0], [0:1] and n_samples rotated roots of unity; for
// c = 1 the exact pencil certificate (rank of the stacked I's and J's).
GlobalRegularityReport is_globally_regular(const ADHMSection& s, int n_samples,
                                           std::uint64_t seed, const Tolerance& tol);

// Gauss-Newton with pseudo-inverse steps and Armijo backtracking on the
// stacked residual (m1, m2, m3); retries with derived seeds, requires the
// result globally regular. Throws ComputeError("no solution found ...").
ADHMSection solve_adhm1d(Index r, Index c, std::uint64_t seed, const Tolerance& tol);

// Exact complex Jacobian of (m1,m2,m3): 3c^2 x (4c^2+4rc), variables
// ordered [vec A1; vec B1; vec I1; vec J1; vec A2; ...], column-major vec.
CMatrix tri_moment_jacobian(const ADHMSection& s);

// The point of B the section passes through over zeta, in standard
// coordinates: m = (sigma_z + i zeta Jquat(sigma_z))/(1+|zeta|^2) with
// sigma_z = X1 + zeta X2; at infinity m = i Jquat(X2). Horizontal
// sections X2 = -i Jquat(X1) give a constant m.
ADHMData section_real_point(const ADHMSection& s, const SpherePoint& p);

// mu_L at the section's real point: a mu_I + b mu_J + c mu_K with the
// moment triple of moment_triple(); Hermitian c x c.
CMatrix real_moment_at(const ADHMSection& s, const SpherePoint& p);

struct ConstancyReport {
  double max_spread = 0.0;
  double mean_norm = 0.0;
  bool ok = false;
};

// Prop.-style constancy audit over seeded sphere samples; requires
// |tri_moment| <= 1e-8 (else ComputeError("section not in mu_C^-1(0)")).
ConstancyReport constancy_check(const ADHMSection& s, int n_samples, std::uint64_t seed);

// Average of real_moment_at over a seeded-rotation Fibonacci sphere grid,
// total measure normalized to 1.
CMatrix real_moment_avg(const ADHMSection& s, int n_quad, std::uint64_t seed);

// Trisymplectic span on the tangent space C^{4c^2+4rc} of the section
// space, from pullbacks of the holomorphic symplectic forms at
// zeta = 0, 1, i. The returned basis consists of the pairwise sums of the
// three pullbacks, so each basis form is individually non-degenerate.
TriSpan tangent_trispan(const ADHMSection& s);

struct ModuliReport {
  Index ker_dim = 0, orbit_dim = 0, moduli_dim = 0, jacobian_rank = 0;
  double sv_gap = 0.0;
};

// ker_dim of the exact Jacobian minus the GL(V)-orbit dimension; demands a
// singular value gap >= 1e3 at the rank cutoff (else
// ComputeError("ill-conditioned rank")).
ModuliReport moduli_dimension(const ADHMSection& s, const Tolerance& tol);

struct UnframedReport {
  Index framed_dim = 0, sl_w_dim = 3, unframed_dim = 0;
  ModuliReport framed;
};

// 8c-3 bookkeeping: framed 4rc figure at r=2 minus dim SL(W) = 3.
UnframedReport rank2_unframed_report(Index c, std::uint64_t seed, const Tolerance& tol);

}  // namespace trisym
