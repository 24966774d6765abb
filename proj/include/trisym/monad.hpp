#pragma once

#include "trisym/sections.hpp"

#include <map>
#include <string>

namespace trisym {

// Degree-1 monad on CP^3 in coordinates [z:w:x:y], framing line {x=y=0}:
//   alpha : V(-1) -> V + V + W,  beta : V + V + W -> V(1)
// stored as the four constant coefficient matrices of each map.
struct MonadData {
  Index r = 0, c = 0;
  std::array<CMatrix, 4> alpha;  // z, w, x, y coefficients, (2c+r) x c
  std::array<CMatrix, 4> beta;   // c x (2c+r)

  MonadData(Index r_, Index c_, std::array<CMatrix, 4> alpha_, std::array<CMatrix, 4> beta_);

  CMatrix alpha_at(const Eigen::Vector4cd& p) const;
  CMatrix beta_at(const Eigen::Vector4cd& p) const;
};

// Assembles the monad blocks from a section without any solution check;
// beta*alpha expands to z^2 m1 + w^2 m2 + zw m3.
MonadData assemble_monad(const ADHMSection& s);

// Checked build: requires |tri_moment| <= 1e-10 and global regularity.
MonadData build_monad(const ADHMSection& s, const Tolerance& tol);

struct ComplexConditionReport {
  std::map<std::string, double> coeff_norms;  // z2 w2 zw zx zy wx wy x2 y2 xy
  bool ok = false;
};

// All ten quadratic-monomial coefficients of beta*alpha; ok iff <= 1e-10.
ComplexConditionReport verify_complex(const MonadData& m);

struct ExactnessReport {
  double min_alpha_sv = 0.0, min_beta_sv = 0.0;
  int n_points = 0;
  bool ok = false;
};

// alpha(p) full column rank and beta(p) full row rank at random unit
// points of CP^3; then ker beta / im alpha has rank r everywhere sampled.
ExactnessReport fiberwise_exactness(const MonadData& m, int n_points, std::uint64_t seed,
                                    const Tolerance& tol);

struct LineParam {
  Eigen::Vector4cd p0, p1;  // two independent points of CP^3

  LineParam(Eigen::Vector4cd a, Eigen::Vector4cd b, const Tolerance& tol);
  static LineParam framing(const Tolerance& tol);  // {x = y = 0}
  static LineParam random(std::uint64_t seed, const Tolerance& tol);
};

struct SplittingReport {
  std::vector<int> digits;  // a_1 >= ... >= a_r, sum 0
  int d_used = 0;
};

// Splitting type of the monad cohomology restricted to the line, from
// h^0(E(k)) of the restricted pencil and of its dual, growing the twist
// window until two consecutive windows agree. D_max <= 0 means 2c+4.
SplittingReport splitting_type(const MonadData& m, const LineParam& line, int d_max,
                               const Tolerance& tol);

// {rank, charge} read off the shapes.
std::pair<Index, Index> charge_rank_report(const MonadData& m);

}  // namespace trisym
