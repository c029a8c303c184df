#ifndef GAMA_PROBLEM_GEN_HPP
#define GAMA_PROBLEM_GEN_HPP

#include "gama/sym_matrix.hpp"

#include <cstdint>

namespace gama {

enum class Divisor { N, NMinus1 };

// Synthetic sparse precision matrix and its covariance. The smallest
// eigenvalue of omega is adjusted to exactly 1 by an identity shift.
struct SyntheticProblem {
  SymMatrix omega;  // true precision
  SymMatrix sigma;  // omega^-1
  Eigen::Index p = 0;
  double target_sparsity_pct = 0.0;
  std::uint64_t seed = 0;
};

// Draws upper-triangle off-diagonals from uniform[-1,1], keeps each with
// probability sp_pct/100, mirrors, then shifts the diagonal so that
// lambda_min(omega) == 1. Deterministic in the seed: structure, values and
// samples use independent derived streams, so the kept-entry pattern does
// not perturb the values.
SyntheticProblem generate_synthetic(Eigen::Index p, double sp_pct, std::uint64_t seed);

// n i.i.d. rows from N(0, sigma), generated as z * chol(sigma)^T.
Eigen::MatrixXd sample_gaussian(const SyntheticProblem& problem, Eigen::Index n,
                                std::uint64_t seed);

// Column-centered Gram matrix over n or n-1.
SymMatrix sample_covariance(const Eigen::MatrixXd& data, Divisor divisor);

}  // namespace gama

#endif  // GAMA_PROBLEM_GEN_HPP
