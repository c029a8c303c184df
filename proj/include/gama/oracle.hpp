#ifndef GAMA_ORACLE_HPP
#define GAMA_ORACLE_HPP

#include "gama/sym_matrix.hpp"

namespace gama {

// High-precision reference solution for small instances (p <= 10), used to
// cross-check every solver path. Runs projected gradient ascent on logdet
// over the dual box with a monotone non-increasing step — no secant step,
// no line search, no splitting — so agreement with the solver is evidence
// rather than tautology. Returns the primal X = Y^-1.
SymMatrix oracle_solve(const SymMatrix& s, double lambda, double tol);

// Closed form at p = 1: 1/(s + lambda). Requires s + lambda > 0.
double scalar_solution(double s, double lambda);

}  // namespace gama

#endif  // GAMA_ORACLE_HPP
