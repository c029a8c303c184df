#ifndef GAMA_PROX_HPP
#define GAMA_PROX_HPP

#include "gama/sym_matrix.hpp"

namespace gama {

// Entrywise x -> sign(x) * max(|x| - t, 0). Produces exact zeros.
SymMatrix soft_threshold(const SymMatrix& m, double t);

// Entrywise soft-threshold with a per-entry threshold matrix (t_ij >= 0).
SymMatrix soft_threshold(const SymMatrix& m, const SymMatrix& t);

// Entrywise clamp to [-t, t]. Complement of soft_threshold:
// x = soft_threshold(x, t) + clip(x, t).
SymMatrix clip(const SymMatrix& m, double t);

// Entrywise clamp to [l_ij, u_ij]. Requires l <= u everywhere; bounds are
// finite by contract (callers never pass an unbounded box).
SymMatrix box_project(const SymMatrix& m, const SymMatrix& l, const SymMatrix& u);

}  // namespace gama

#endif  // GAMA_PROX_HPP
