#pragma once

#include "trisym/linalg.hpp"

#include <array>

namespace trisym {

// One point of B(r,c): A,B in End(V), I in Hom(W,V), J in Hom(V,W),
// dim V = c, dim W = r. Also used for tangent vectors to B.
struct ADHMData {
  Index r = 0, c = 0;
  CMatrix A, B, I, J;

  ADHMData() = default;
  ADHMData(Index r_, Index c_, CMatrix a, CMatrix b, CMatrix i, CMatrix j);

  static ADHMData zero(Index r, Index c);
  static ADHMData random(Index r, Index c, std::uint64_t seed);

  ADHMData& operator+=(const ADHMData& o);
  friend ADHMData operator+(ADHMData x, const ADHMData& y) { return x += y; }
  friend ADHMData operator*(const Complex& s, ADHMData x) {
    x.A *= s; x.B *= s; x.I *= s; x.J *= s;
    return x;
  }
  double norm() const;
};

CMatrix mu_c(const ADHMData& x);  // [A,B] + IJ
CMatrix mu_r(const ADHMData& x);  // [A,A*] + [B,B*] + II* - J*J, Hermitian

// moment triple matching the Kaehler forms (omega_I, omega_J, omega_K)
// below, common normalization, paired against u(V) by Im Tr(M xi)
std::array<CMatrix, 3> moment_triple(const ADHMData& x);

struct GroupElement {
  CMatrix g;
  bool unitary = false;

  GroupElement(CMatrix g_, bool unitary_, const Tolerance& tol);
  static GroupElement identity(Index c);
};

// (g A g^-1, g B g^-1, g I, J g^-1)
ADHMData act(const GroupElement& g, const ADHMData& x);

bool is_stable(const ADHMData& x, const Tolerance& tol);
bool is_costable(const ADHMData& x, const Tolerance& tol);
bool is_regular(const ADHMData& x, const Tolerance& tol);

struct RegularityReport {
  bool stable = false, costable = false;
  double stable_margin = 0.0, costable_margin = 0.0;  // relative sigma_c of the closure stack

  bool regular() const { return stable && costable; }
  double margin() const { return std::min(stable_margin, costable_margin); }
};

RegularityReport regularity(const ADHMData& x, const Tolerance& tol);

// quaternionic tangent operator (-B*, A*, -J*, I*); anti-linear, squares to -1
ADHMData jquat(const ADHMData& v);

// infinitesimal gl(V) action (xi A - A xi, xi B - B xi, xi I, -J xi)
ADHMData inf_action(const CMatrix& xi, const ADHMData& x);

enum class PairingKind { Metric, OmegaI, OmegaJ, OmegaK, HoloOmegaI };

// Flat hyperkaehler pairings on tangent quadruples:
//   Metric      g(v,w) = Re Tr(vA wA* + vB wB* + vI wI* + vJ wJ*)
//   OmegaX      g(v, X w) for X = i, jquat, i*jquat
//   HoloOmegaI  Tr(vA wB - wA vB + vI wJ - wI vJ)
Complex hk_pairing(const ADHMData& v, const ADHMData& w, PairingKind kind);

struct MomentCompatEntry {
  double lhs = 0.0, rhs = 0.0, abs_err = 0.0, scale = 0.0;
};

struct MomentCompatReport {
  std::array<MomentCompatEntry, 3> component;  // I, J, K
  double max_abs_err() const;
};

// Central finite difference of <mu_i(X + t v), xi> against omega_i(xi*, v);
// the fitted scale lhs/rhs is reported, not assumed.
MomentCompatReport moment_compat_check(const ADHMData& x, const CMatrix& xi,
                                       const ADHMData& v, double h);

struct BalanceResult {
  GroupElement g;
  ADHMData balanced;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_trace;
};

// Gradient iteration g <- exp(-eta mu_r(g.X)) g until |mu_r| <= residual_abs.
BalanceResult kempf_ness_balance(const ADHMData& x, const Tolerance& tol);

}  // namespace trisym
