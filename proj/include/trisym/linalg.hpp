#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace trisym {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Thrown when a numerical kernel (SVD, eigensolver) fails or a named
// computational condition cannot be met. The message carries the
// condition name; callers match on it.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double rank_rel = 1e-9;     // relative singular value cutoff
  double residual_abs = 1e-10;
  int max_iter = 500;

  void validate() const {
    if (!(rank_rel > 0.0) || !(residual_abs > 0.0) || max_iter < 1)
      throw std::invalid_argument("invalid tolerance");
  }
};

// Deterministic seeded generator. Gaussians use an explicit Box-Muller on
// the raw 64-bit stream so results do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent sub-stream; fanning out by counter keeps sampling loops
  // order-independent.
  Rng derive(std::uint64_t counter) const;

  double uniform();                       // [0,1)
  double gaussian();                      // N(0,1)
  Complex cgaussian();                    // (N(0,1)+i N(0,1))/sqrt(2)
  CMatrix cgaussian_matrix(Index rows, Index cols);
  CMatrix unitary(Index n);               // Haar-ish via QR of a Gaussian
  Eigen::Vector3cd unit_coeff3();         // unit vector in C^3

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  std::uint64_t next_u64();
};

// Number of singular values above rank_rel * sigma_max * max(rows, cols).
Index numerical_rank(const CMatrix& m, const Tolerance& tol);

// Orthonormal basis of the numerical kernel; cols - numerical_rank columns.
CMatrix nullspace_basis(const CMatrix& m, const Tolerance& tol);

// Orthonormal basis of the column span.
CMatrix orth(const CMatrix& m, const Tolerance& tol);

// Smallest subspace containing span(seed) and invariant under every
// operator; iterates U <- orth([U, T1 U, T2 U, ...]) until the dimension
// stabilizes (at most n rounds).
CMatrix subspace_closure(const CMatrix& seed, const std::vector<CMatrix>& operators,
                         const Tolerance& tol);

}  // namespace trisym
