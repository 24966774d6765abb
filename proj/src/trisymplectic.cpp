#include "trisym/trisymplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace trisym {

namespace {

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

// generic but deterministic coefficient triples, used where the spec asks
// for "a generic Omega in the span" without a caller-provided seed
Eigen::Vector3cd generic_coeff(int k) {
  Rng rng(0x5eedbeefULL + static_cast<std::uint64_t>(k));
  return rng.unit_coeff3();
}

}  // namespace

TwoForm::TwoForm(CMatrix m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("two-form matrix not square");
  if (matrix.rows() % 2 != 0) throw std::invalid_argument("two-form dimension must be even");
  if (!matrix.allFinite()) throw std::invalid_argument("two-form has non-finite entries");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if (((matrix + matrix.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw std::invalid_argument("two-form matrix not skew-symmetric");
}

TriSpan::TriSpan(TwoForm o1, TwoForm o2, TwoForm o3, const Tolerance& tol)
    : basis{std::move(o1), std::move(o2), std::move(o3)} {
  if (basis[0].dim() != basis[1].dim() || basis[0].dim() != basis[2].dim())
    throw std::invalid_argument("two-forms live on different spaces");
  CMatrix stack(basis[0].matrix.size(), 3);
  for (int i = 0; i < 3; ++i) stack.col(i) = vec(basis[i].matrix);
  if (numerical_rank(stack, tol) != 3)
    throw std::invalid_argument("two-forms linearly dependent");
}

CMatrix TriSpan::combine(const Eigen::Vector3cd& coeff) const {
  return coeff(0) * basis[0].matrix + coeff(1) * basis[1].matrix + coeff(2) * basis[2].matrix;
}

std::vector<std::pair<Complex, int>> pencil_degenerate_params(const TwoForm& o1,
                                                              const TwoForm& o2,
                                                              const Tolerance& tol) {
  const Index n2 = o2.dim();
  if (o1.dim() != n2) throw std::invalid_argument("pencil forms of different dimension");
  if (numerical_rank(o2.matrix, tol) != n2) throw ComputeError("pencil base degenerate");

  const CMatrix phi = o1.matrix * o2.matrix.inverse();
  Eigen::ComplexEigenSolver<CMatrix> eig(phi, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) throw ComputeError("eigensolver failed");
  const CVector lambda = eig.eigenvalues();

  const double radius = 1e-6 * std::max(1e-300, lambda.cwiseAbs().maxCoeff());
  std::vector<Complex> centers;
  std::vector<int> counts;
  std::vector<Complex> sums;
  for (Index i = 0; i < lambda.size(); ++i) {
    bool placed = false;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (std::abs(lambda(i) - centers[k]) <= radius) {
        sums[k] += lambda(i);
        counts[k] += 1;
        centers[k] = sums[k] / static_cast<double>(counts[k]);
        placed = true;
        break;
      }
    }
    if (!placed) {
      centers.push_back(lambda(i));
      sums.push_back(lambda(i));
      counts.push_back(1);
    }
  }
  std::vector<std::pair<Complex, int>> clusters;
  for (std::size_t k = 0; k < centers.size(); ++k) clusters.emplace_back(centers[k], counts[k]);
  std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return clusters;
}

RankProfileReport rank_profile(const TriSpan& span, int n_samples, std::uint64_t seed,
                               const Tolerance& tol) {
  RankProfileReport rep;
  rep.half_dim = span.half_dim();
  Rng rng(seed);

  auto record = [&](const Eigen::Vector3cd& coeff) {
    const Index r = numerical_rank(span.combine(coeff), tol);
    rep.ranks[r] += 1;
  };

  record(Eigen::Vector3cd(1, 0, 0));
  record(Eigen::Vector3cd(0, 1, 0));
  record(Eigen::Vector3cd(0, 0, 1));
  for (int k = 0; k < n_samples; ++k) record(rng.derive(k).unit_coeff3());

  // degenerate-locus samples from pencils of random pairs
  const int n_pairs = std::max(3, n_samples / 10);
  for (int k = 0; k < n_pairs; ++k) {
    Rng sub = rng.derive(1000003ULL + k);
    const Eigen::Vector3cd u = sub.unit_coeff3();
    const Eigen::Vector3cd v = sub.unit_coeff3();
    TwoForm ou(span.combine(u)), ov(span.combine(v));
    if (numerical_rank(ov.matrix, tol) != span.dim()) continue;
    for (const auto& [lambda, mult] : pencil_degenerate_params(ou, ov, tol)) {
      Eigen::Vector3cd p = u - lambda * v;
      const double norm = p.norm();
      if (norm < 1e-12) continue;
      record(p / norm);
    }
  }

  rep.ok = true;
  for (const auto& [rank, count] : rep.ranks)
    if (rank != 0 && rank != rep.half_dim && rank != span.dim()) rep.ok = false;
  return rep;
}

namespace {

// projection onto S along S2 via block solve of [S | S2]
CMatrix projector_along(const CMatrix& s, const CMatrix& s2) {
  const Index n = s.rows();
  CMatrix joint(n, s.cols() + s2.cols());
  joint << s, s2;
  Eigen::PartialPivLU<CMatrix> lu(joint);
  const CMatrix inv = lu.solve(CMatrix::Identity(n, n));
  return s * inv.topRows(s.cols());
}

}  // namespace

HAlgebra build_h_algebra(const TriSpan& span, const Tolerance& tol) {
  // pilot trichotomy check
  const RankProfileReport pilot = rank_profile(span, 24, 0x70177017ULL, tol);
  if (!pilot.ok) throw ComputeError("not trisymplectic");

  const Index n2 = span.dim();
  const Index n = span.half_dim();

  std::vector<CMatrix> projectors;
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [i, j] : pairs) {
    // use a generic combination as the pencil base if a basis form is degenerate
    Eigen::Vector3cd u = Eigen::Vector3cd::Zero(), v = Eigen::Vector3cd::Zero();
    u(i) = 1;
    v(j) = 1;
    TwoForm ou(span.combine(u)), ov(span.combine(v));
    if (numerical_rank(ov.matrix, tol) != n2) {
      v = generic_coeff(17 * i + j);
      ov = TwoForm(span.combine(v));
      if (numerical_rank(ov.matrix, tol) != n2) throw ComputeError("not trisymplectic");
    }
    const auto clusters = pencil_degenerate_params(ou, ov, tol);
    if (clusters.size() != 2) throw ComputeError("not trisymplectic");
    std::array<CMatrix, 2> ann;
    for (int k = 0; k < 2; ++k) {
      const CMatrix degenerate = span.combine(u - clusters[k].first * v);
      ann[k] = nullspace_basis(degenerate, tol);
      if (ann[k].cols() != n) throw ComputeError("not trisymplectic");
    }
    CMatrix stacked(n2, 2 * n);
    stacked << ann[0], ann[1];
    if (numerical_rank(stacked, tol) != n2) throw ComputeError("annihilator overlap");
    projectors.push_back(projector_along(ann[0], ann[1]));
  }

  // span of {1, projectors}; orthonormalize the traceless parts
  const CMatrix id = CMatrix::Identity(n2, n2);
  CMatrix traceless(n2 * n2, static_cast<Index>(projectors.size()));
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const Complex tr = projectors[k].trace() / static_cast<double>(n2);
    traceless.col(static_cast<Index>(k)) = vec(projectors[k] - tr * id);
  }
  const CMatrix basis_vecs = orth(traceless, tol);
  if (basis_vecs.cols() != 3) throw ComputeError("not trisymplectic");

  HAlgebra h;
  h.generators[0] = id;
  for (int k = 0; k < 3; ++k) h.generators[k + 1] = unvec(basis_vecs.col(k), n2, n2);

  // closure, structure table, non-commutativity, trace-form checks
  auto coefficients = [&](const CMatrix& x) {
    Eigen::Vector4cd coeff;
    coeff(0) = x.trace() / static_cast<double>(n2);
    const CVector xv = vec(x - coeff(0) * id);
    for (int k = 0; k < 3; ++k) coeff(k + 1) = basis_vecs.col(k).dot(xv);
    return coeff;
  };
  double closure_residual = 0.0;
  double commutator_norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const CMatrix prod = h.generators[i] * h.generators[j];
      const Eigen::Vector4cd coeff = coefficients(prod);
      CMatrix recon = coeff(0) * id;
      for (int k = 0; k < 3; ++k) recon += coeff(k + 1) * h.generators[k + 1];
      closure_residual = std::max(closure_residual,
                                  (prod - recon).norm() / std::max(1.0, prod.norm()));
      h.structure_table[i][j] = coeff;
      if (i < j)
        commutator_norm = std::max(
            commutator_norm, (prod - h.generators[j] * h.generators[i]).norm());
    }
  }
  if (closure_residual > 1e-8) throw ComputeError("not trisymplectic");
  if (commutator_norm < 1e-8) throw ComputeError("not trisymplectic");

  Eigen::Matrix4cd trace_form;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      trace_form(i, j) = (h.generators[i] * h.generators[j]).trace();
  if (numerical_rank(trace_form, tol) != 4) throw ComputeError("not trisymplectic");

  return h;
}

QuaternionicBasis quaternionic_basis_from_h(const HAlgebra& h, const Tolerance& tol) {
  const Index n2 = h.dim();
  const CMatrix id = CMatrix::Identity(n2, n2);

  // On traceless elements X, Y of Mat(2): XY + YX = tr2(XY) * 1, and the
  // representation satisfies tr_V = (n2/2) tr2. b below is that bilinear form.
  auto b = [&](const CMatrix& x, const CMatrix& y) {
    return (x * y).trace() * (2.0 / static_cast<double>(n2));
  };

  const std::array<CMatrix, 3> t{h.generators[1], h.generators[2], h.generators[3]};
  auto element = [&](const Eigen::Vector3cd& u) -> CMatrix {
    return u(0) * t[0] + u(1) * t[1] + u(2) * t[2];
  };
  Eigen::Matrix3cd gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = b(t[i], t[j]);

  auto qnorm = [&](const Eigen::Vector3cd& u) { return (u.transpose() * gram * u)(0); };

  // u with b(u,u) != 0, normalized to -2 so element(u)^2 = -1
  Eigen::Vector3cd u = Eigen::Vector3cd::Zero();
  for (int k = 0; k < 8; ++k) {
    Eigen::Vector3cd cand = k < 3 ? Eigen::Vector3cd::Unit(k).eval() : generic_coeff(k);
    if (std::abs(qnorm(cand)) > 1e-6) {
      u = cand;
      break;
    }
  }
  if (u.isZero()) throw ComputeError("algebra not quaternionic");
  u *= std::sqrt(Complex(-2.0) / qnorm(u));

  // v orthogonal to u with b(v,v) != 0
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  for (int k = 0; k < 8; ++k) {
    Eigen::Vector3cd cand = k < 3 ? Eigen::Vector3cd::Unit(k).eval() : generic_coeff(100 + k);
    const Complex uu = qnorm(u);
    cand -= ((u.transpose() * gram * cand)(0) / uu) * u;
    if (std::abs(qnorm(cand)) > 1e-6) {
      v = cand;
      break;
    }
  }
  if (v.isZero()) throw ComputeError("algebra not quaternionic");
  v *= std::sqrt(Complex(-2.0) / qnorm(v));

  QuaternionicBasis qb{element(u), element(v), element(u) * element(v)};
  const double res =
      std::max({(qb.I * qb.I + id).norm(), (qb.J * qb.J + id).norm(),
                (qb.K * qb.K + id).norm(), (qb.I * qb.J - qb.K).norm(),
                (qb.J * qb.K - qb.I).norm(), (qb.K * qb.I - qb.J).norm()});
  if (res > 1e-8) throw ComputeError("algebra not quaternionic");
  return qb;
}

CMatrix metric_from_trispan(const TriSpan& span, const HAlgebra& h,
                            const QuaternionicBasis& qb, const Tolerance& tol) {
  const Index n2 = span.dim();
  // Omega fixed by rho_I  <=>  I^T M + M I = 0; solve on the 3-dim span
  CMatrix lhs(n2 * n2, 3);
  for (int k = 0; k < 3; ++k) {
    const CMatrix& m = span.basis[k].matrix;
    lhs.col(k) = vec(qb.I.transpose() * m + m * qb.I);
  }
  const CMatrix kernel = nullspace_basis(lhs, tol);
  if (kernel.cols() != 1) throw ComputeError("span/basis mismatch");
  const CMatrix omega_i = span.combine(Eigen::Vector3cd(kernel.col(0)));

  CMatrix g = -omega_i * qb.I;
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ComputeError("span/basis mismatch");
  g = (g + g.transpose()) / 2.0;
  if (numerical_rank(g, tol) != n2) throw ComputeError("span/basis mismatch");
  return g;
}

TriSpan trispan_from_metric(const CMatrix& g, const QuaternionicBasis& qb,
                            const Tolerance& tol) {
  const Index n2 = g.rows();
  if (g.cols() != n2) throw std::invalid_argument("metric not square");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("metric not symmetric");
  if (numerical_rank(g, tol) != n2) throw std::invalid_argument("metric degenerate");
  for (const CMatrix* x : {&qb.I, &qb.J, &qb.K}) {
    if ((x->transpose() * g * (*x) - g).norm() > 1e-8 * g.norm())
      throw ComputeError("metric not SL(2)-invariant");
  }
  auto make = [&](const CMatrix& x) {
    CMatrix m = g * x;
    return TwoForm((m - m.transpose()) / 2.0);  // symmetrize roundoff away
  };
  return TriSpan(make(qb.I), make(qb.J), make(qb.K), tol);
}

QForm::QForm(Eigen::Matrix3cd m, const Tolerance& tol) : matrix(std::move(m)) {
  matrix = (matrix + matrix.transpose()).eval() / 2.0;
  Index imax = 0, jmax = 0;
  matrix.cwiseAbs().maxCoeff(&imax, &jmax);
  const Complex top = matrix(imax, jmax);
  if (std::abs(top) == 0.0) throw ComputeError("degenerate quadric");
  matrix /= top;
  if (numerical_rank(matrix, tol) != 3) throw ComputeError("degenerate quadric");
}

QForm quadratic_form_q(const TriSpan& span, const Tolerance& tol, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::Vector3cd> samples;
  for (int k = 0; samples.size() < 16 && k < 64; ++k) {
    Rng sub = rng.derive(k);
    const Eigen::Vector3cd u = sub.unit_coeff3();
    const Eigen::Vector3cd v = sub.unit_coeff3();
    TwoForm ou(span.combine(u)), ov(span.combine(v));
    if (numerical_rank(ov.matrix, tol) != span.dim()) continue;
    auto clusters = pencil_degenerate_params(ou, ov, tol);
    if (clusters.size() != 2) throw ComputeError("not trisymplectic");
    for (const auto& [lambda, mult] : clusters) {
      Eigen::Vector3cd p = u - lambda * v;
      if (p.norm() < 1e-12) continue;
      samples.push_back(p / p.norm());
    }
  }
  if (samples.size() < 12) throw ComputeError("no quadric through degenerate locus");

  // each degenerate sample p gives a row of the linear system Q(p,p) = 0
  CMatrix sys(static_cast<Index>(samples.size()), 6);
  for (Index i = 0; i < sys.rows(); ++i) {
    const Eigen::Vector3cd& p = samples[static_cast<std::size_t>(i)];
    sys(i, 0) = p(0) * p(0);
    sys(i, 1) = p(1) * p(1);
    sys(i, 2) = p(2) * p(2);
    sys(i, 3) = 2.0 * p(0) * p(1);
    sys(i, 4) = 2.0 * p(0) * p(2);
    sys(i, 5) = 2.0 * p(1) * p(2);
  }
  Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
  const CVector q = svd.matrixV().col(5);
  Eigen::Matrix3cd qm;
  qm << q(0), q(3), q(4), q(3), q(1), q(5), q(4), q(5), q(2);
  QForm qform(qm, tol);

  for (const auto& p : samples)
    if (std::abs(qform.eval(p)) > 1e-8)
      throw ComputeError("no quadric through degenerate locus");
  // bounded away from zero on a generic direction
  bool generic_ok = false;
  for (int k = 0; k < 8 && !generic_ok; ++k)
    generic_ok = std::abs(qform.eval(rng.derive(5000 + k).unit_coeff3())) >= 1e-3;
  if (!generic_ok) throw ComputeError("no quadric through degenerate locus");
  return qform;
}

std::vector<NullFamilyEntry> null_family(const TriSpan& span, const QForm& qform,
                                         const std::vector<CP1>& t_samples,
                                         const Tolerance& tol) {
  if (numerical_rank(qform.matrix, tol) != 3) throw ComputeError("degenerate quadric");
  const Index n = span.half_dim();

  // base point on the conic from a pencil of the first two basis forms
  Eigen::Vector3cd p0;
  {
    Eigen::Vector3cd u(1, 0, 0), v(0, 1, 0);
    TwoForm ov(span.combine(v));
    if (numerical_rank(ov.matrix, tol) != span.dim()) {
      v = generic_coeff(23);
      ov = TwoForm(span.combine(v));
    }
    const auto clusters = pencil_degenerate_params(TwoForm(span.combine(u)), ov, tol);
    if (clusters.empty()) throw ComputeError("degenerate quadric");
    p0 = u - clusters.front().first * v;
    p0 /= p0.norm();
  }

  // directions spanning a complement of p0; lines through p0 give the
  // stereographic parametrization t -> second intersection with {Q=0}
  Eigen::JacobiSVD<CMatrix> fsvd(CMatrix(p0), Eigen::ComputeFullU);
  const Eigen::Vector3cd d1 = fsvd.matrixU().col(1);
  const Eigen::Vector3cd d2 = fsvd.matrixU().col(2);

  std::vector<NullFamilyEntry> out;
  out.reserve(t_samples.size());
  for (const CP1& t : t_samples) {
    if (t.norm() == 0.0) throw std::invalid_argument("zero homogeneous coordinates");
    const Eigen::Vector3cd d = t(0) * d1 + t(1) * d2;
    const Complex qd = qform.eval(d);
    const Complex qpd = (p0.transpose() * qform.matrix * d)(0);
    Eigen::Vector3cd p = qd * p0 - 2.0 * qpd * d;
    if (p.norm() < 1e-14) p = p0;  // the line tangent at p0
    p /= p.norm();
    CMatrix basis = nullspace_basis(span.combine(p), tol);
    if (basis.cols() != n) throw ComputeError("degenerate quadric");
    out.push_back({t, p, std::move(basis)});
  }
  return out;
}

bool is_nondegenerate_subspace(const TriSpan& span, const HAlgebra& h, const CMatrix& w,
                               const Tolerance& tol) {
  std::vector<CMatrix> gens(h.generators.begin() + 1, h.generators.end());
  const CMatrix hw = subspace_closure(w, gens, tol);
  if (hw.cols() == 0) return false;
  for (int k = 0; k < 3; ++k) {
    const CMatrix restricted = hw.transpose() * span.combine(generic_coeff(300 + k)) * hw;
    if (numerical_rank(restricted, tol) == hw.cols()) return true;
  }
  return false;
}

TriSpan quotient_tangent(const TriSpan& span, const HAlgebra& h, const CMatrix& g,
                         const CMatrix& gm, const Tolerance& tol) {
  if (gm.cols() == 0) return span;
  if (!is_nondegenerate_subspace(span, h, gm, tol))
    throw ComputeError("degenerate group direction");
  std::vector<CMatrix> gens(h.generators.begin() + 1, h.generators.end());
  const CMatrix w1 = subspace_closure(gm, gens, tol);
  const CMatrix w = nullspace_basis(w1.transpose() * g, tol);
  auto restrict_form = [&](const CMatrix& m) {
    CMatrix r = w.transpose() * m * w;
    return TwoForm((r - r.transpose()) / 2.0);
  };
  return TriSpan(restrict_form(span.basis[0].matrix), restrict_form(span.basis[1].matrix),
                 restrict_form(span.basis[2].matrix), tol);
}

}  // namespace trisym
