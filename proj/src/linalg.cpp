#include "trisym/linalg.hpp"

#include <cmath>

namespace trisym {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double svd_cutoff(const Eigen::VectorXd& sv, Index rows, Index cols, const Tolerance& tol) {
  if (sv.size() == 0) return 0.0;
  return tol.rank_rel * sv(0) * static_cast<double>(std::max(rows, cols));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
  // warm up so that small seeds do not correlate
  for (int i = 0; i < 4; ++i) splitmix64(state_);
}

Rng Rng::derive(std::uint64_t counter) const {
  std::uint64_t mix = seed_;
  splitmix64(mix);
  return Rng(mix ^ (0x9e3779b97f4a7c15ULL * (counter + 1)));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  // Box-Muller; draws pairs and discards the spare to stay stateless
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::cgaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

CMatrix Rng::cgaussian_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = cgaussian();
  return m;
}

CMatrix Rng::unitary(Index n) {
  const CMatrix g = cgaussian_matrix(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  // fix phases so the factorization is unique
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Eigen::Vector3cd Rng::unit_coeff3() {
  Eigen::Vector3cd v;
  for (int i = 0; i < 3; ++i) v(i) = cgaussian();
  const double n = v.norm();
  if (n == 0.0) return Eigen::Vector3cd(1, 0, 0);
  return v / n;
}

Index numerical_rank(const CMatrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  Eigen::JacobiSVD<CMatrix> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = svd_cutoff(sv, m.rows(), m.cols(), tol);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

CMatrix nullspace_basis(const CMatrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.cols() == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::Identity(m.cols(), m.cols());
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = svd_cutoff(sv, m.rows(), m.cols(), tol);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

CMatrix orth(const CMatrix& m, const Tolerance& tol) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = svd_cutoff(sv, m.rows(), m.cols(), tol);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix subspace_closure(const CMatrix& seed, const std::vector<CMatrix>& operators,
                         const Tolerance& tol) {
  tol.validate();
  const Index n = seed.rows();
  for (const CMatrix& t : operators)
    if (t.rows() != n || t.cols() != n)
      throw std::invalid_argument("operator dimension mismatch with seed");
  CMatrix u = orth(seed, tol);
  if (u.cols() == 0) return u;
  for (Index round = 0; round <= n; ++round) {
    CMatrix grown(n, u.cols() * (1 + static_cast<Index>(operators.size())));
    grown.leftCols(u.cols()) = u;
    Index off = u.cols();
    for (const CMatrix& t : operators) {
      grown.middleCols(off, u.cols()) = t * u;
      off += u.cols();
    }
    CMatrix next = orth(grown, tol);
    if (next.cols() == u.cols()) return next;
    u = next;
  }
  return u;  // dimension is capped by n, so the loop always stabilizes
}

}  // namespace trisym
