#include "trisym/sections.hpp"

#include <cmath>

namespace trisym {

namespace {

constexpr double kPi = 3.14159265358979323846;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

}  // namespace

ADHMSection::ADHMSection(ADHMData x1, ADHMData x2) : X1(std::move(x1)), X2(std::move(x2)) {
  if (X1.r != X2.r || X1.c != X2.c)
    throw std::invalid_argument("section endpoints of different shape");
}

std::array<double, 3> sphere_convention(const SpherePoint& p) {
  if (p.infinite) return {-1.0, 0.0, 0.0};
  const double n = 1.0 + std::norm(p.zeta);
  return {(1.0 - std::norm(p.zeta)) / n, 2.0 * p.zeta.real() / n, 2.0 * p.zeta.imag() / n};
}

ADHMData section_eval(const ADHMSection& s, Complex z, Complex w) {
  const double n = std::sqrt(std::norm(z) + std::norm(w));
  if (n == 0.0) throw std::invalid_argument("zero homogeneous coordinates");
  z /= n;
  w /= n;
  return z * s.X1 + w * s.X2;
}

ADHMData section_eval(const ADHMSection& s, const SpherePoint& p) {
  if (p.infinite) return section_eval(s, Complex(0), Complex(1));
  return section_eval(s, Complex(1), p.zeta);
}

double MomentValue::norm() const {
  return std::sqrt(m1.squaredNorm() + m2.squaredNorm() + m3.squaredNorm());
}

MomentValue tri_moment(const ADHMSection& s) {
  const ADHMData &x = s.X1, &y = s.X2;
  MomentValue m;
  m.m1 = mu_c(x);
  m.m2 = mu_c(y);
  m.m3 = x.A * y.B - y.B * x.A + y.A * x.B - x.B * y.A + x.I * y.J + y.I * x.J;
  return m;
}

GlobalRegularityReport is_globally_regular(const ADHMSection& s, int n_samples,
                                           std::uint64_t seed, const Tolerance& tol) {
  GlobalRegularityReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  std::vector<std::array<Complex, 2>> points{{Complex(1), Complex(0)},
                                             {Complex(0), Complex(1)}};
  // rotated roots of unity through a seeded SU(2) Moebius map
  Rng rng(seed);
  const CMatrix u = rng.unitary(2);
  for (int k = 0; k < n_samples; ++k) {
    const double theta = 2.0 * kPi * k / std::max(1, n_samples);
    const Eigen::Vector2cd base(Complex(1.0 / std::sqrt(2.0)),
                                std::polar(1.0 / std::sqrt(2.0), theta));
    const Eigen::Vector2cd rotated = u * base;
    points.push_back({rotated(0), rotated(1)});
  }

  bool sampled_ok = true;
  for (const auto& [z, w] : points) {
    const RegularityReport r = regularity(section_eval(s, z, w), tol);
    rep.worst_margin = std::min(rep.worst_margin, r.margin());
    if (!r.regular()) {
      sampled_ok = false;
      rep.witnesses.push_back({z, w});
    }
  }

  if (s.c() == 1) {
    // exact certificate: z I1 + w I2 and z J1 + w J2 vanish somewhere iff
    // the stacked pencils drop rank
    rep.exact_certificate = true;
    CMatrix istack(2, s.r());
    istack.row(0) = s.X1.I;
    istack.row(1) = s.X2.I;
    CMatrix jstack(s.r(), 2);
    jstack.col(0) = s.X1.J;
    jstack.col(1) = s.X2.J;
    const bool i_ok = numerical_rank(istack, tol) == 2;
    const bool j_ok = numerical_rank(jstack, tol) == 2;
    rep.flag = i_ok && j_ok;
    if (!i_ok) {
      // the root of the 1 x r pencil: kernel of [I1^T I2^T]
      const CMatrix ker = nullspace_basis(istack.transpose(), tol);
      if (ker.cols() > 0) rep.witnesses.push_back({ker(0, 0), ker(1, 0)});
    }
    if (!j_ok) {
      const CMatrix ker = nullspace_basis(jstack, tol);
      if (ker.cols() > 0) rep.witnesses.push_back({ker(0, 0), ker(1, 0)});
    }
  } else {
    rep.flag = sampled_ok;
  }
  return rep;
}

CMatrix tri_moment_jacobian(const ADHMSection& s) {
  const Index c = s.c(), r = s.r();
  const Index c2 = c * c, cr = c * r;
  const Index nvar = 4 * c2 + 4 * cr;
  const CMatrix idc = CMatrix::Identity(c, c);

  // d vec([A,B])/d vec(A) = B^T (x) 1 - 1 (x) B, etc. (column-major vec)
  auto dcomm_dA = [&](const CMatrix& b) { return kron(b.transpose(), idc) - kron(idc, b); };
  auto dIJ_dI = [&](const CMatrix& j) { return kron(j.transpose(), idc); };
  auto dIJ_dJ = [&](const CMatrix& i) { return kron(idc, i); };

  CMatrix jac = CMatrix::Zero(3 * c2, nvar);
  const Index oA1 = 0, oB1 = c2, oI1 = 2 * c2, oJ1 = 2 * c2 + cr;
  const Index oA2 = 2 * c2 + 2 * cr, oB2 = oA2 + c2, oI2 = oA2 + 2 * c2, oJ2 = oI2 + cr;
  const ADHMData &x = s.X1, &y = s.X2;

  // m1 = [A1,B1] + I1 J1
  jac.block(0, oA1, c2, c2) = dcomm_dA(x.B);
  jac.block(0, oB1, c2, c2) = -dcomm_dA(x.A);
  jac.block(0, oI1, c2, cr) = dIJ_dI(x.J);
  jac.block(0, oJ1, c2, cr) = dIJ_dJ(x.I);
  // m2 = [A2,B2] + I2 J2
  jac.block(c2, oA2, c2, c2) = dcomm_dA(y.B);
  jac.block(c2, oB2, c2, c2) = -dcomm_dA(y.A);
  jac.block(c2, oI2, c2, cr) = dIJ_dI(y.J);
  jac.block(c2, oJ2, c2, cr) = dIJ_dJ(y.I);
  // m3 = [A1,B2] + [A2,B1] + I1 J2 + I2 J1
  jac.block(2 * c2, oA1, c2, c2) = dcomm_dA(y.B);
  jac.block(2 * c2, oB2, c2, c2) = -dcomm_dA(x.A);
  jac.block(2 * c2, oA2, c2, c2) = dcomm_dA(x.B);
  jac.block(2 * c2, oB1, c2, c2) = -dcomm_dA(y.A);
  jac.block(2 * c2, oI1, c2, cr) = dIJ_dI(y.J);
  jac.block(2 * c2, oJ2, c2, cr) = dIJ_dJ(x.I);
  jac.block(2 * c2, oI2, c2, cr) = dIJ_dI(x.J);
  jac.block(2 * c2, oJ1, c2, cr) = dIJ_dJ(y.I);
  return jac;
}

namespace {

CVector stack_residual(const MomentValue& m) {
  CVector f(m.m1.size() + m.m2.size() + m.m3.size());
  f << vec(m.m1), vec(m.m2), vec(m.m3);
  return f;
}

ADHMSection apply_step(const ADHMSection& s, const CVector& delta) {
  const Index c = s.c(), r = s.r();
  const Index c2 = c * c, cr = c * r;
  auto block = [&](Index off, Index rows, Index cols) {
    return Eigen::Map<const CMatrix>(delta.data() + off, rows, cols);
  };
  ADHMData x1(r, c, s.X1.A + block(0, c, c), s.X1.B + block(c2, c, c),
              s.X1.I + block(2 * c2, c, r), s.X1.J + block(2 * c2 + cr, r, c));
  const Index o2 = 2 * c2 + 2 * cr;
  ADHMData x2(r, c, s.X2.A + block(o2, c, c), s.X2.B + block(o2 + c2, c, c),
              s.X2.I + block(o2 + 2 * c2, c, r), s.X2.J + block(o2 + 2 * c2 + cr, r, c));
  return ADHMSection(std::move(x1), std::move(x2));
}

}  // namespace

ADHMSection solve_adhm1d(Index r, Index c, std::uint64_t seed, const Tolerance& tol) {
  tol.validate();
  if (r < 1 || c < 1) throw std::invalid_argument("solve needs r >= 1 and c >= 1");
  double best_residual = std::numeric_limits<double>::infinity();

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng = Rng(seed).derive(attempt);
    ADHMData x1(r, c, rng.cgaussian_matrix(c, c), rng.cgaussian_matrix(c, c),
                rng.cgaussian_matrix(c, r), rng.cgaussian_matrix(r, c));
    ADHMData x2(r, c, rng.cgaussian_matrix(c, c), rng.cgaussian_matrix(c, c),
                rng.cgaussian_matrix(c, r), rng.cgaussian_matrix(r, c));
    ADHMSection s(std::move(x1), std::move(x2));
    CVector f = stack_residual(tri_moment(s));
    double res = f.norm();

    for (int iter = 0; iter < 200 && res > tol.residual_abs; ++iter) {
      const CMatrix jac = tri_moment_jacobian(s);
      Eigen::JacobiSVD<CMatrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
      svd.setThreshold(tol.rank_rel);
      const CVector delta = -svd.solve(f);

      // Armijo backtracking, factor 0.5, slope 1e-4
      double t = 1.0;
      bool accepted = false;
      for (int back = 0; back < 40; ++back) {
        const ADHMSection cand = apply_step(s, t * delta);
        const CVector fc = stack_residual(tri_moment(cand));
        if (fc.squaredNorm() <= (1.0 - 1e-4 * t) * f.squaredNorm()) {
          s = cand;
          f = fc;
          res = f.norm();
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
    }

    best_residual = std::min(best_residual, res);
    if (res <= tol.residual_abs &&
        is_globally_regular(s, 32, seed ^ 0xabcdefULL, tol).flag)
      return s;
  }
  throw ComputeError("no solution found (best residual " + std::to_string(best_residual) +
                     ")");
}

ADHMData section_real_point(const ADHMSection& s, const SpherePoint& p) {
  if (p.infinite) return Complex(0, 1) * jquat(s.X2);
  const ADHMData sig = s.X1 + p.zeta * s.X2;
  const double n = 1.0 + std::norm(p.zeta);
  return (1.0 / n) * (sig + (Complex(0, 1) * p.zeta) * jquat(sig));
}

CMatrix real_moment_at(const ADHMSection& s, const SpherePoint& p) {
  const auto [a, b, c] = sphere_convention(p);
  const auto mu = moment_triple(section_real_point(s, p));
  return a * mu[0] + b * mu[1] + c * mu[2];
}

namespace {

// seeded rotation applied to sphere coordinates, then back to the chart
SpherePoint rotate_to_point(const Eigen::Matrix3d& rot, const Eigen::Vector3d& abc) {
  const Eigen::Vector3d v = rot * abc;
  if (v(0) < -1.0 + 1e-12) return SpherePoint::infinity();
  return SpherePoint::at(Complex(v(1), v(2)) / (1.0 + v(0)));
}

Eigen::Matrix3d seeded_rotation(std::uint64_t seed) {
  Rng rng(seed);
  // rotation from a random unit quaternion
  double q[4];
  double n2 = 0;
  for (double& qi : q) {
    qi = rng.gaussian();
    n2 += qi * qi;
  }
  const double n = std::sqrt(n2);
  for (double& qi : q) qi /= n;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Eigen::Matrix3d rot;
  rot << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return rot;
}

}  // namespace

ConstancyReport constancy_check(const ADHMSection& s, int n_samples, std::uint64_t seed) {
  if (tri_moment(s).norm() > 1e-8) throw ComputeError("section not in mu_C^-1(0)");
  const Eigen::Matrix3d rot = seeded_rotation(seed);

  std::vector<CMatrix> values;
  values.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double a = 1.0 - 2.0 * (k + 0.5) / n_samples;
    const double phi = 2.0 * kPi * k * 0.6180339887498949;
    const double rho = std::sqrt(std::max(0.0, 1.0 - a * a));
    values.push_back(real_moment_at(
        s, rotate_to_point(rot, Eigen::Vector3d(a, rho * std::cos(phi), rho * std::sin(phi)))));
  }
  CMatrix mean = CMatrix::Zero(s.c(), s.c());
  for (const CMatrix& v : values) mean += v;
  mean /= static_cast<double>(values.size());

  ConstancyReport rep;
  rep.mean_norm = mean.norm();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      rep.max_spread = std::max(rep.max_spread, (values[i] - values[j]).norm());
  rep.ok = rep.max_spread <= 1e-6 * (1.0 + rep.mean_norm);
  return rep;
}

CMatrix real_moment_avg(const ADHMSection& s, int n_quad, std::uint64_t seed) {
  const Eigen::Matrix3d rot = seeded_rotation(seed);
  CMatrix acc = CMatrix::Zero(s.c(), s.c());
  for (int k = 0; k < n_quad; ++k) {
    const double a = 1.0 - 2.0 * (k + 0.5) / n_quad;
    const double phi = 2.0 * kPi * k * 0.6180339887498949;
    const double rho = std::sqrt(std::max(0.0, 1.0 - a * a));
    acc += real_moment_at(
        s, rotate_to_point(rot, Eigen::Vector3d(a, rho * std::cos(phi), rho * std::sin(phi))));
  }
  return acc / static_cast<double>(n_quad);
}

TriSpan tangent_trispan(const ADHMSection& s) {
  const Index c = s.c(), r = s.r();
  const Index n0 = 2 * c * c + 2 * c * r;  // dim of B(r,c)

  // matrix of Tr(vA wB - wA vB + vI wJ - wI vJ) on C^{n0}, coordinates
  // ordered [vec A; vec B; vec I; vec J]
  CMatrix w = CMatrix::Zero(n0, n0);
  const Index c2 = c * c, cr = c * r;
  const Index oA = 0, oB = c2, oI = 2 * c2, oJ = 2 * c2 + cr;
  // Tr(vA wB): d^2/dvec(A)dvec(B) of Tr(AB) = permutation pairing
  for (Index i = 0; i < c; ++i)
    for (Index j = 0; j < c; ++j) {
      const Index ia = oA + j * c + i;  // A(i,j), column-major
      const Index ib = oB + i * c + j;  // B(j,i)
      w(ia, ib) += 1.0;
      w(ib, ia) -= 1.0;
    }
  for (Index i = 0; i < c; ++i)
    for (Index j = 0; j < r; ++j) {
      const Index ii = oI + j * c + i;  // I(i,j)
      const Index ij = oJ + i * r + j;  // J(j,i)
      w(ii, ij) += 1.0;
      w(ij, ii) -= 1.0;
    }

  // pullbacks at zeta = 0, 1, i in the normalized chart are the block
  // forms [[z^2 W, zw W], [zw W, w^2 W]]
  auto pullback = [&](Complex z, Complex wq) {
    const double n = std::sqrt(std::norm(z) + std::norm(wq));
    z /= n;
    wq /= n;
    CMatrix t(2 * n0, 2 * n0);
    t.topLeftCorner(n0, n0) = (z * z) * w;
    t.topRightCorner(n0, n0) = (z * wq) * w;
    t.bottomLeftCorner(n0, n0) = (z * wq) * w;
    t.bottomRightCorner(n0, n0) = (wq * wq) * w;
    return t;
  };
  const CMatrix t0 = pullback(Complex(1), Complex(0));
  const CMatrix t1 = pullback(Complex(1), Complex(1));
  const CMatrix ti = pullback(Complex(1), Complex(0, 1));

  // pairwise sums span the same space and are individually non-degenerate
  const Tolerance tol;
  return TriSpan(TwoForm(t0 + t1), TwoForm(t1 + ti), TwoForm(t0 + ti), tol);
}

ModuliReport moduli_dimension(const ADHMSection& s, const Tolerance& tol) {
  if (tri_moment(s).norm() > 1e-8) throw ComputeError("section not in mu_C^-1(0)");
  const Index c = s.c(), r = s.r();
  const Index nvar = 4 * c * c + 4 * c * r;

  auto gap_checked_rank = [&](const CMatrix& m) -> std::pair<Index, double> {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cut = tol.rank_rel * (sv.size() ? sv(0) : 0.0) *
                       static_cast<double>(std::max(m.rows(), m.cols()));
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++rank;
    // distance across the cutoff: retained sigma against the first
    // discarded one (or against the cutoff itself at full rank)
    double gap = std::numeric_limits<double>::infinity();
    if (rank > 0) {
      const double below = rank < sv.size() ? std::max(sv(rank), cut / 1e6) : cut;
      gap = sv(rank - 1) / below;
    }
    if (gap < 1e3) throw ComputeError("ill-conditioned rank");
    return {rank, gap};
  };

  ModuliReport rep;
  const auto [jr, jgap] = gap_checked_rank(tri_moment_jacobian(s));
  rep.jacobian_rank = jr;
  rep.sv_gap = jgap;
  rep.ker_dim = nvar - jr;

  // stabilizer of (X1, X2) under xi -> (xi*X1, xi*X2)
  CMatrix action(2 * (2 * c * c + 2 * c * r), c * c);
  const CMatrix idc = CMatrix::Identity(c, c);
  auto fill = [&](Index off, const ADHMData& x) {
    action.block(off, 0, c * c, c * c) = kron(x.A.transpose(), idc) - kron(idc, x.A);
    action.block(off + c * c, 0, c * c, c * c) =
        kron(x.B.transpose(), idc) - kron(idc, x.B);
    action.block(off + 2 * c * c, 0, c * r, c * c) = kron(x.I.transpose(), idc);
    action.block(off + 2 * c * c + c * r, 0, c * r, c * c) =
        -kron(idc, CMatrix(x.J));
  };
  fill(0, s.X1);
  fill(2 * c * c + 2 * c * r, s.X2);
  const Index stab = c * c - numerical_rank(action, tol);
  rep.orbit_dim = c * c - stab;
  rep.moduli_dim = rep.ker_dim - rep.orbit_dim;
  return rep;
}

UnframedReport rank2_unframed_report(Index c, std::uint64_t seed, const Tolerance& tol) {
  if (c < 1) throw std::invalid_argument("charge must be >= 1");
  UnframedReport rep;
  const ADHMSection s = solve_adhm1d(2, c, seed, tol);
  rep.framed = moduli_dimension(s, tol);
  rep.framed_dim = rep.framed.moduli_dim;
  rep.sl_w_dim = 3;  // all fibers of the forgetful map are SL(W), dim W = 2
  rep.unframed_dim = rep.framed_dim - rep.sl_w_dim;
  return rep;
}

}  // namespace trisym
