#include "trisym/monad.hpp"

#include <algorithm>

namespace trisym {

MonadData::MonadData(Index r_, Index c_, std::array<CMatrix, 4> alpha_,
                     std::array<CMatrix, 4> beta_)
    : r(r_), c(c_), alpha(std::move(alpha_)), beta(std::move(beta_)) {
  if (r < 2 || c < 1) throw std::invalid_argument("monad needs r >= 2 and c >= 1");
  for (const CMatrix& a : alpha)
    if (a.rows() != 2 * c + r || a.cols() != c)
      throw std::invalid_argument("alpha coefficient shape inconsistent");
  for (const CMatrix& b : beta)
    if (b.rows() != c || b.cols() != 2 * c + r)
      throw std::invalid_argument("beta coefficient shape inconsistent");
}

CMatrix MonadData::alpha_at(const Eigen::Vector4cd& p) const {
  return p(0) * alpha[0] + p(1) * alpha[1] + p(2) * alpha[2] + p(3) * alpha[3];
}

CMatrix MonadData::beta_at(const Eigen::Vector4cd& p) const {
  return p(0) * beta[0] + p(1) * beta[1] + p(2) * beta[2] + p(3) * beta[3];
}

MonadData assemble_monad(const ADHMSection& s) {
  const Index r = s.r(), c = s.c();
  const CMatrix idc = CMatrix::Identity(c, c);
  const CMatrix z0cc = CMatrix::Zero(c, c);
  const CMatrix z0rc = CMatrix::Zero(r, c);

  // alpha = (A1 z + A2 w + x ; B1 z + B2 w + y ; J1 z + J2 w), stacked on V+V+W
  std::array<CMatrix, 4> alpha;
  for (auto& a : alpha) a.resize(2 * c + r, c);
  alpha[0] << s.X1.A, s.X1.B, s.X1.J;
  alpha[1] << s.X2.A, s.X2.B, s.X2.J;
  alpha[2] << idc, z0cc, z0rc;
  alpha[3] << z0cc, idc, z0rc;

  // beta = (-(B1 z + B2 w + y), A1 z + A2 w + x, I1 z + I2 w)
  std::array<CMatrix, 4> beta;
  for (auto& b : beta) b.resize(c, 2 * c + r);
  beta[0] << -s.X1.B, s.X1.A, s.X1.I;
  beta[1] << -s.X2.B, s.X2.A, s.X2.I;
  beta[2] << z0cc, idc, CMatrix::Zero(c, r);
  beta[3] << -idc, z0cc, CMatrix::Zero(c, r);

  return MonadData(r, c, std::move(alpha), std::move(beta));
}

MonadData build_monad(const ADHMSection& s, const Tolerance& tol) {
  if (tri_moment(s).norm() > 1e-10)
    throw ComputeError("section not in mu_C^-1(0)");
  if (!is_globally_regular(s, 32, 0x6d6f6e61ULL, tol).flag)
    throw ComputeError("section not globally regular");
  return assemble_monad(s);
}

ComplexConditionReport verify_complex(const MonadData& m) {
  static const char* names[4] = {"z", "w", "x", "y"};
  ComplexConditionReport rep;
  rep.ok = true;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      // coefficient of names[i]*names[j] in beta*alpha
      CMatrix coeff = m.beta[i] * m.alpha[j];
      if (i != j) coeff += m.beta[j] * m.alpha[i];
      std::string key = std::string(names[i]) + names[j];
      if (i == j) key = std::string(names[i]) + "2";
      const double norm = coeff.norm();
      rep.coeff_norms[key] = norm;
      if (norm > 1e-10) rep.ok = false;
    }
  }
  return rep;
}

ExactnessReport fiberwise_exactness(const MonadData& m, int n_points, std::uint64_t seed,
                                    const Tolerance& tol) {
  Rng rng(seed);
  ExactnessReport rep;
  rep.n_points = n_points;
  rep.min_alpha_sv = std::numeric_limits<double>::infinity();
  rep.min_beta_sv = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_points; ++k) {
    Rng sub = rng.derive(k);
    Eigen::Vector4cd p;
    for (int i = 0; i < 4; ++i) p(i) = sub.cgaussian();
    p /= p.norm();
    {
      Eigen::JacobiSVD<CMatrix> svd(m.alpha_at(p));
      rep.min_alpha_sv = std::min(rep.min_alpha_sv, svd.singularValues().minCoeff());
    }
    {
      Eigen::JacobiSVD<CMatrix> svd(m.beta_at(p));
      rep.min_beta_sv = std::min(rep.min_beta_sv, svd.singularValues().minCoeff());
    }
  }
  const double floor = tol.rank_rel * static_cast<double>(2 * m.c + m.r);
  rep.ok = rep.min_alpha_sv > floor && rep.min_beta_sv > floor;
  return rep;
}

LineParam::LineParam(Eigen::Vector4cd a, Eigen::Vector4cd b, const Tolerance& tol)
    : p0(std::move(a)), p1(std::move(b)) {
  CMatrix coords(2, 4);
  coords.row(0) = p0.transpose();
  coords.row(1) = p1.transpose();
  if (numerical_rank(coords, tol) != 2)
    throw std::invalid_argument("line points linearly dependent");
}

LineParam LineParam::framing(const Tolerance& tol) {
  return LineParam(Eigen::Vector4cd(1, 0, 0, 0), Eigen::Vector4cd(0, 1, 0, 0), tol);
}

LineParam LineParam::random(std::uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  Eigen::Vector4cd a, b;
  for (int i = 0; i < 4; ++i) a(i) = rng.cgaussian();
  for (int i = 0; i < 4; ++i) b(i) = rng.cgaussian();
  return LineParam(a / a.norm(), b / b.norm(), tol);
}

namespace {

// dim ker of v(s,t) -> (P0 s + P1 t) v(s,t) on degree-k coefficient vectors
Index pencil_kernel_dim(const CMatrix& ps, const CMatrix& pt, int k, const Tolerance& tol) {
  const Index rows = ps.rows(), cols = ps.cols();
  CMatrix big = CMatrix::Zero(rows * (k + 2), cols * (k + 1));
  for (int j = 0; j <= k; ++j) {
    big.block(static_cast<Index>(j) * rows, static_cast<Index>(j) * cols, rows, cols) += ps;
    big.block(static_cast<Index>(j + 1) * rows, static_cast<Index>(j) * cols, rows, cols) +=
        pt;
  }
  return cols * (k + 1) - numerical_rank(big, tol);
}

}  // namespace

SplittingReport splitting_type(const MonadData& m, const LineParam& line, int d_max,
                               const Tolerance& tol) {
  const Index r = m.r, c = m.c;
  if (d_max <= 0) d_max = static_cast<int>(2 * c) + 4;

  const CMatrix a0 = m.alpha_at(line.p0), a1 = m.alpha_at(line.p1);
  const CMatrix b0 = m.beta_at(line.p0), b1 = m.beta_at(line.p1);

  // the restricted monad must stay exact on the line (sampled, including
  // the chart points the degree bookkeeping relies on)
  {
    Rng rng(0x11e5ULL);
    for (int k = 0; k < 12; ++k) {
      Complex s(1), t(0);
      if (k == 1) {
        s = 0;
        t = 1;
      } else if (k > 1) {
        s = rng.cgaussian();
        t = rng.cgaussian();
      }
      Eigen::JacobiSVD<CMatrix> sa(s * a0 + t * a1);
      Eigen::JacobiSVD<CMatrix> sb(s * b0 + t * b1);
      const double floor = tol.rank_rel * static_cast<double>(2 * c + r);
      if (sa.singularValues().minCoeff() <= floor ||
          sb.singularValues().minCoeff() <= floor)
        throw ComputeError("monad not exact on the line");
    }
  }

  // h^0(E(k)) = dim ker beta_k - c k for k >= 0, and the dual bundle
  // (digits negated) from the transposed pencil. First differences give
  // #{a >= -k} and #{a <= k}.
  auto h0 = [&](int k) { return pencil_kernel_dim(b0, b1, k, tol) - c * k; };
  auto h0_dual = [&](int k) {
    return pencil_kernel_dim(a0.transpose(), a1.transpose(), k, tol) - c * k;
  };

  // h^0(E(-1)) = sum_{a >= 1} a by the two-chart Cech computation, which
  // collapses to the kernel of the stacked products beta(p_i) alpha(p_j):
  // the H^1(O(-2))-class representative u forces v0 = alpha(p1) u,
  // v1 = alpha(p0) u on single monomials, and beta v = 0 gives the stack.
  auto h0_minus1 = [&](const CMatrix& bb0, const CMatrix& bb1, const CMatrix& aa0,
                       const CMatrix& aa1) {
    CMatrix stack(4 * c, c);
    stack << bb0 * aa0, bb0 * aa1, bb1 * aa0, bb1 * aa1;
    return c - numerical_rank(stack, tol);
  };
  const Index he_m1 = h0_minus1(b0, b1, a0, a1);
  const Index hd_m1 = h0_minus1(a0.transpose(), a1.transpose(), b0.transpose(),
                                b1.transpose());

  std::vector<Index> he{h0(0)};       // he[k] = h^0(E(k))
  std::vector<Index> hd{h0_dual(0)};  // hd[k] = h^0(E^dual(k))
  std::vector<int> previous;

  for (int d = 1; d <= d_max; ++d) {
    he.push_back(h0(d));
    hd.push_back(h0_dual(d));
    // the digit counts are complete once the first differences saturate at r
    if (he[d] - he[d - 1] != r || hd[d] - hd[d - 1] != r) {
      previous.clear();
      continue;
    }

    std::map<int, Index> count;
    bool consistent = true;
    for (int k = 2; k <= d; ++k) {
      const Index eq_neg = (he[k] - he[k - 1]) - (he[k - 1] - he[k - 2]);  // #{a = -k}
      const Index eq_pos = (hd[k] - hd[k - 1]) - (hd[k - 1] - hd[k - 2]);  // #{a = k}
      if (eq_neg < 0 || eq_pos < 0) consistent = false;
      if (eq_neg > 0) count[-k] = eq_neg;
      if (eq_pos > 0) count[k] = eq_pos;
    }
    // h^0(E(-1)) = sum_{a >= 1} a pins #{a = 1}; dually for #{a = -1}
    Index tail_pos_sum = 0, tail_neg_sum = 0, tail_count = 0;
    for (const auto& [digit, n] : count) {
      (digit > 0 ? tail_pos_sum : tail_neg_sum) += std::abs(digit) * n;
      tail_count += n;
    }
    const Index n_plus = he_m1 - tail_pos_sum;
    const Index n_minus = hd_m1 - tail_neg_sum;
    const Index n_zero = r - tail_count - n_plus - n_minus;
    if (n_plus < 0 || n_minus < 0 || n_zero < 0) consistent = false;
    if (consistent) {
      if (n_plus > 0) count[1] = n_plus;
      if (n_minus > 0) count[-1] = n_minus;
      if (n_zero > 0) count[0] = n_zero;
    }

    std::vector<int> digits;
    if (consistent) {
      long long sum = 0, h0_at_0 = 0, h0_at_1 = 0;
      for (const auto& [digit, n] : count)
        for (Index q = 0; q < n; ++q) {
          digits.push_back(digit);
          sum += digit;
          h0_at_0 += std::max(0, digit + 1);
          h0_at_1 += std::max(0, digit + 2);
        }
      std::sort(digits.rbegin(), digits.rend());
      if (sum != 0 || static_cast<Index>(digits.size()) != r ||
          h0_at_0 != static_cast<long long>(he[0]) ||
          h0_at_1 != static_cast<long long>(he[1]))
        consistent = false;
    }

    if (consistent) {
      if (digits == previous) return {digits, d};
      previous = digits;
    } else {
      previous.clear();
    }
  }
  throw ComputeError("splitting not stabilized at D_max");
}

std::pair<Index, Index> charge_rank_report(const MonadData& m) { return {m.r, m.c}; }

}  // namespace trisym
