#include "trisym/adhm.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace trisym {

ADHMData::ADHMData(Index r_, Index c_, CMatrix a, CMatrix b, CMatrix i, CMatrix j)
    : r(r_), c(c_), A(std::move(a)), B(std::move(b)), I(std::move(i)), J(std::move(j)) {
  if (r < 1 || c < 1) throw std::invalid_argument("adhm data needs r >= 1 and c >= 1");
  if (A.rows() != c || A.cols() != c || B.rows() != c || B.cols() != c ||
      I.rows() != c || I.cols() != r || J.rows() != r || J.cols() != c)
    throw std::invalid_argument("adhm block shapes inconsistent");
  if (!A.allFinite() || !B.allFinite() || !I.allFinite() || !J.allFinite())
    throw std::invalid_argument("adhm data has non-finite entries");
}

ADHMData ADHMData::zero(Index r, Index c) {
  return ADHMData(r, c, CMatrix::Zero(c, c), CMatrix::Zero(c, c), CMatrix::Zero(c, r),
                  CMatrix::Zero(r, c));
}

ADHMData ADHMData::random(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  return ADHMData(r, c, rng.cgaussian_matrix(c, c), rng.cgaussian_matrix(c, c),
                  rng.cgaussian_matrix(c, r), rng.cgaussian_matrix(r, c));
}

ADHMData& ADHMData::operator+=(const ADHMData& o) {
  A += o.A;
  B += o.B;
  I += o.I;
  J += o.J;
  return *this;
}

double ADHMData::norm() const {
  return std::sqrt(A.squaredNorm() + B.squaredNorm() + I.squaredNorm() + J.squaredNorm());
}

CMatrix mu_c(const ADHMData& x) { return x.A * x.B - x.B * x.A + x.I * x.J; }

CMatrix mu_r(const ADHMData& x) {
  const CMatrix as = x.A.adjoint(), bs = x.B.adjoint();
  return x.A * as - as * x.A + x.B * bs - bs * x.B + x.I * x.I.adjoint() -
         x.J.adjoint() * x.J;
}

std::array<CMatrix, 3> moment_triple(const ADHMData& x) {
  const CMatrix mc = mu_c(x);
  const CMatrix he_re = (mc + mc.adjoint()) / 2.0;
  const CMatrix he_im = (mc - mc.adjoint()) / Complex(0, 2);
  return {mu_r(x), 2.0 * he_im, -2.0 * he_re};
}

GroupElement::GroupElement(CMatrix g_, bool unitary_, const Tolerance& tol)
    : g(std::move(g_)), unitary(unitary_) {
  if (g.rows() != g.cols()) throw std::invalid_argument("group element not square");
  if (numerical_rank(g, tol) != g.rows()) throw std::invalid_argument("group element singular");
  if (unitary &&
      (g.adjoint() * g - CMatrix::Identity(g.rows(), g.rows())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("group element not unitary");
}

GroupElement GroupElement::identity(Index c) {
  return GroupElement(CMatrix::Identity(c, c), true, Tolerance{});
}

ADHMData act(const GroupElement& g, const ADHMData& x) {
  const CMatrix ginv = g.g.inverse();
  return ADHMData(x.r, x.c, g.g * x.A * ginv, g.g * x.B * ginv, g.g * x.I, x.J * ginv);
}

namespace {

// Krylov-style stack [S, A S, B S, ...] up to c rounds; stability of the
// quadruple is rank c of this stack, the margin is its relative sigma_c.
struct ClosureAudit {
  bool full = false;
  double margin = 0.0;
};

ClosureAudit closure_audit(const CMatrix& seed, const CMatrix& a, const CMatrix& b,
                           const Tolerance& tol) {
  const Index c = a.rows();
  ClosureAudit audit;
  const CMatrix u = subspace_closure(seed, {a, b}, tol);
  audit.full = (u.cols() == c);

  CMatrix stack = seed;
  CMatrix frontier = seed;
  for (Index round = 1; round < c; ++round) {
    CMatrix next(c, 2 * frontier.cols());
    next << a * frontier, b * frontier;
    CMatrix grown(c, stack.cols() + next.cols());
    grown << stack, next;
    stack = std::move(grown);
    frontier = std::move(next);
  }
  Eigen::JacobiSVD<CMatrix> svd(stack);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() >= c && sv(0) > 0) audit.margin = sv(c - 1) / sv(0);
  return audit;
}

}  // namespace

RegularityReport regularity(const ADHMData& x, const Tolerance& tol) {
  RegularityReport rep;
  const ClosureAudit st = closure_audit(x.I, x.A, x.B, tol);
  rep.stable = st.full;
  rep.stable_margin = st.margin;
  // costability by dualization: conjugate-transpose data
  const ClosureAudit co = closure_audit(x.J.adjoint(), x.A.adjoint(), x.B.adjoint(), tol);
  rep.costable = co.full;
  rep.costable_margin = co.margin;
  return rep;
}

bool is_stable(const ADHMData& x, const Tolerance& tol) {
  return subspace_closure(x.I, {x.A, x.B}, tol).cols() == x.c;
}

bool is_costable(const ADHMData& x, const Tolerance& tol) {
  return subspace_closure(x.J.adjoint(), {x.A.adjoint(), x.B.adjoint()}, tol).cols() == x.c;
}

bool is_regular(const ADHMData& x, const Tolerance& tol) {
  return is_stable(x, tol) && is_costable(x, tol);
}

ADHMData jquat(const ADHMData& v) {
  return ADHMData(v.r, v.c, -v.B.adjoint(), v.A.adjoint(), -v.J.adjoint(), v.I.adjoint());
}

ADHMData inf_action(const CMatrix& xi, const ADHMData& x) {
  return ADHMData(x.r, x.c, xi * x.A - x.A * xi, xi * x.B - x.B * xi, xi * x.I, -x.J * xi);
}

namespace {

double metric_pairing(const ADHMData& v, const ADHMData& w) {
  const Complex s = (v.A.cwiseProduct(w.A.conjugate())).sum() +
                    (v.B.cwiseProduct(w.B.conjugate())).sum() +
                    (v.I.cwiseProduct(w.I.conjugate())).sum() +
                    (v.J.cwiseProduct(w.J.conjugate())).sum();
  return s.real();
}

}  // namespace

Complex hk_pairing(const ADHMData& v, const ADHMData& w, PairingKind kind) {
  if (v.r != w.r || v.c != w.c) throw std::invalid_argument("tangent shape mismatch");
  switch (kind) {
    case PairingKind::Metric:
      return metric_pairing(v, w);
    case PairingKind::OmegaI:
      return metric_pairing(v, Complex(0, 1) * w);
    case PairingKind::OmegaJ:
      return metric_pairing(v, jquat(w));
    case PairingKind::OmegaK:
      return metric_pairing(v, Complex(0, 1) * jquat(w));
    case PairingKind::HoloOmegaI:
      return (v.A * w.B - w.A * v.B).trace() + (v.I * w.J - w.I * v.J).trace();
  }
  throw std::invalid_argument("unknown pairing");
}

double MomentCompatReport::max_abs_err() const {
  return std::max({component[0].abs_err, component[1].abs_err, component[2].abs_err});
}

MomentCompatReport moment_compat_check(const ADHMData& x, const CMatrix& xi,
                                       const ADHMData& v, double h) {
  if ((xi + xi.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, xi.norm()))
    throw std::invalid_argument("xi not anti-Hermitian");
  const ADHMData xi_x = inf_action(xi, x);
  const std::array<PairingKind, 3> forms{PairingKind::OmegaI, PairingKind::OmegaJ,
                                         PairingKind::OmegaK};
  MomentCompatReport rep;
  const ADHMData xp = x + h * v;
  const ADHMData xm = x + Complex(-h) * v;
  const auto mu_p = moment_triple(xp);
  const auto mu_m = moment_triple(xm);
  for (int i = 0; i < 3; ++i) {
    const double lhs =
        ((mu_p[i] * xi).trace().imag() - (mu_m[i] * xi).trace().imag()) / (2 * h);
    const double rhs = hk_pairing(xi_x, v, forms[i]).real();
    rep.component[i].lhs = lhs;
    rep.component[i].rhs = rhs;
    rep.component[i].scale = rhs != 0.0 ? lhs / rhs : 0.0;
    rep.component[i].abs_err = std::abs(lhs - 2.0 * rhs);
  }
  return rep;
}

BalanceResult kempf_ness_balance(const ADHMData& x, const Tolerance& tol) {
  tol.validate();
  const Index c = x.c;
  CMatrix g = CMatrix::Identity(c, c);
  ADHMData y = x;
  double eta = 0.1 / std::max(1.0, x.norm() * x.norm());

  std::vector<double> trace;
  double res = mu_r(y).norm();
  trace.push_back(res);
  int iter = 0;
  for (; iter < tol.max_iter && res > tol.residual_abs; ++iter) {
    const CMatrix m = mu_r(y);
    // exp(-eta m) via the eigendecomposition of the Hermitian m
    Eigen::SelfAdjointEigenSolver<CMatrix> eig((m + m.adjoint()) / 2.0);
    bool accepted = false;
    double step = eta;
    for (int halving = 0; halving < 60; ++halving) {
      const CMatrix e =
          eig.eigenvectors() *
          (-step * eig.eigenvalues().array()).exp().matrix().asDiagonal() *
          eig.eigenvectors().adjoint();
      const GroupElement ge(e, false, tol);
      const ADHMData cand = act(ge, y);
      const double cand_res = mu_r(cand).norm();
      if (cand_res < res) {
        y = cand;
        g = e * g;
        res = cand_res;
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    trace.push_back(res);
    if (!accepted) break;
  }
  if (res > tol.residual_abs)
    throw ComputeError("balance diverged (residual " + std::to_string(res) + ")");
  BalanceResult out{GroupElement(g, false, tol), y, iter, res, std::move(trace)};
  return out;
}

}  // namespace trisym
