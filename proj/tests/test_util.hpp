#ifndef GAMA_TESTS_TEST_UTIL_HPP
#define GAMA_TESTS_TEST_UTIL_HPP

#include "gama/sym_matrix.hpp"

#include <cstdint>
#include <random>

namespace gama::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline SymMatrix random_symmetric(Eigen::Index p, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      const double v = uniform(rng, -scale, scale);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return SymMatrix::from_matrix(m);
}

// Well-conditioned random SPD matrix: Gram matrix of a random square factor
// plus a small ridge.
inline SymMatrix random_spd(Eigen::Index p, std::uint64_t seed, double ridge = 0.1) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd a(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      a(i, j) = uniform(rng, -1.0, 1.0);
    }
  }
  Eigen::MatrixXd g = a * a.transpose() / static_cast<double>(p);
  g.diagonal().array() += ridge;
  return SymMatrix::from_matrix(g);
}

}  // namespace gama::testing

#endif  // GAMA_TESTS_TEST_UTIL_HPP
