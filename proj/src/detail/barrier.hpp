#pragma once

// Primal log-barrier path following for the minimal-regular-norm extension
// problem, written as a conic program over M = M0 + W N^H:
//
//   interior p:  min (1-t) r + t c   s.t.  sum_j f0_ij <= r,  sum_i f1_ij <= c,
//                                          |m_ij| <= f0_ij^(1-t) f1_ij^t
//   p = inf:     min r               s.t.  sum_j s_ij <= r,   |m_ij| <= s_ij
//   p = 1:       min c               s.t.  sum_i s_ij <= c,   |m_ij| <= s_ij
//
// with t = 1/p. The interior objective equals the Calderon product bound of
// M after balancing r = c, hence the regular norm of M.

#include "regop/core.hpp"

namespace regop::detail {

struct ConicSolution {
  Matrix m;             // minimizer
  Matrix psi;           // cone gradient 2 m_ij / phi_ij; rows of conj(psi) lie in S
  double objective = 0.0;
  double gap = 0.0;     // nu / t at exit, bounds objective - optimum
  int steps = 0;
  bool converged = false;
};

/// m0 is any feasible matrix and nperp an orthonormal basis of the
/// complement of S (n x (n-k), possibly empty). Throws nothing; on budget
/// exhaustion returns the last iterate with converged = false.
ConicSolution solve_extension_conic(const Matrix& m0, const Matrix& nperp, ExponentSpec p, double rel_gap,
                                    int max_steps);

}  // namespace regop::detail
