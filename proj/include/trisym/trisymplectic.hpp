#pragma once

#include "trisym/linalg.hpp"

#include <array>
#include <map>
#include <utility>

namespace trisym {

// Skew-symmetric complex bilinear form on C^{2n}, stored as its matrix:
// omega(x, y) = x^T M y.
struct TwoForm {
  CMatrix matrix;

  explicit TwoForm(CMatrix m);
  Index dim() const { return matrix.rows(); }
};

// Three independent 2-forms spanning a candidate trisymplectic structure.
struct TriSpan {
  std::array<TwoForm, 3> basis;

  TriSpan(TwoForm o1, TwoForm o2, TwoForm o3, const Tolerance& tol);

  Index dim() const { return basis[0].dim(); }
  Index half_dim() const { return dim() / 2; }
  CMatrix combine(const Eigen::Vector3cd& coeff) const;
};

struct RankProfileReport {
  std::map<Index, int> ranks;  // observed rank -> count
  bool ok = false;
  Index half_dim = 0;
};

// Samples random coefficient triples plus the basis forms plus the
// pencil-degenerate combinations (the random samples alone never hit the
// degenerate locus), and checks every observed rank lies in {0, n, 2n}.
RankProfileReport rank_profile(const TriSpan& span, int n_samples, std::uint64_t seed,
                               const Tolerance& tol);

// Eigenvalue clusters of phi = O1 o O2^{-1}, merged at radius
// 1e-6 * max|lambda|. O1 - lambda O2 is degenerate at each cluster value.
std::vector<std::pair<Complex, int>> pencil_degenerate_params(const TwoForm& o1,
                                                              const TwoForm& o2,
                                                              const Tolerance& tol);

// The Mat(2) subalgebra of End(V) spanned by the projections onto
// annihilators of degenerate pencil combinations. generators[0] is the
// identity; generators[1..3] are traceless and orthonormal as vectors.
struct HAlgebra {
  std::array<CMatrix, 4> generators;
  // structure_table[i][j] = coefficients of generators[i]*generators[j]
  // in the generator basis
  std::array<std::array<Eigen::Vector4cd, 4>, 4> structure_table;

  Index dim() const { return generators[0].rows(); }
};

HAlgebra build_h_algebra(const TriSpan& span, const Tolerance& tol);

struct QuaternionicBasis {
  CMatrix I, J, K;  // I^2 = J^2 = K^2 = -1, IJ = K
};

QuaternionicBasis quaternionic_basis_from_h(const HAlgebra& h, const Tolerance& tol);

// Unique (up to scale) SL(2)-invariant metric inducing the span: finds the
// rho_I-fixed ray Omega_I in the span and returns g = -Omega_I(., I.).
CMatrix metric_from_trispan(const TriSpan& span, const HAlgebra& h,
                            const QuaternionicBasis& qb, const Tolerance& tol);

// (Omega_I, Omega_J, Omega_K) with Omega_X(.,.) = g(., X.).
TriSpan trispan_from_metric(const CMatrix& g, const QuaternionicBasis& qb,
                            const Tolerance& tol);

// Symmetric 3x3 form on coefficient space whose zero set is exactly the
// degenerate combinations; largest-magnitude entry normalized to 1.
struct QForm {
  Eigen::Matrix3cd matrix;

  explicit QForm(Eigen::Matrix3cd m, const Tolerance& tol);
  Complex eval(const Eigen::Vector3cd& p) const { return (p.transpose() * matrix * p)(0); }
};

QForm quadratic_form_q(const TriSpan& span, const Tolerance& tol, std::uint64_t seed);

// Point [t0:t1] on CP^1 parametrizing the conic {Q = 0}.
using CP1 = Eigen::Vector2cd;

struct NullFamilyEntry {
  CP1 t;
  Eigen::Vector3cd coeff;  // point on the conic
  CMatrix basis;           // null space of the degenerate form, dim n
};

// Rational (stereographic) parametrization of the conic of degenerate
// forms; returns the null space S_t of each sample.
std::vector<NullFamilyEntry> null_family(const TriSpan& span, const QForm& qform,
                                         const std::vector<CP1>& t_samples,
                                         const Tolerance& tol);

// W is non-degenerate iff a generic span element restricts to a
// non-degenerate form on the H-submodule H.W.
bool is_nondegenerate_subspace(const TriSpan& span, const HAlgebra& h, const CMatrix& w,
                               const Tolerance& tol);

// Tangent-level trisymplectic quotient: W1 = H.gm, W = W1^perp_g, restrict
// the basis forms to W.
TriSpan quotient_tangent(const TriSpan& span, const HAlgebra& h, const CMatrix& g,
                         const CMatrix& gm, const Tolerance& tol);

}  // namespace trisym
