#pragma once

// Minimal-norm regular extensions of an operator given on a subspace, and
// lower bounds for its regular norm on the subspace from finite families.
//
// For u : S -> l_p^m, every extension M has regular_norm(M) >= the regular
// norm of u on S, and the two coincide at the optimum. extension_min_norm
// attacks the problem from above, subspace_regular_lowerbound from below.

#include "regop/norms.hpp"

namespace regop {

struct ExtensionOptions {
  double rel_gap = 1e-10;  // barrier duality gap, relative to the objective
  int max_newton = 5000;
  PowerOptions norm;
};

struct ExtensionSolution {
  double value = 0.0;      // regular_norm(minimizer, p)
  Matrix minimizer;        // m x n, minimizer * basis = images
  double conic_gap = 0.0;  // value - optimum <= conic_gap (up to centering error)
  Matrix dual;             // m x n; rows of conj(dual) lie in S; empty if not computed
  int newton_steps = 0;
};

/// Thrown when the barrier method runs out of Newton steps. best() is
/// feasible, so its regular norm is an upper bound.
class ExtensionBudgetError : public BudgetError {
 public:
  ExtensionBudgetError(const std::string& what, double upper, Matrix best)
      : BudgetError(what, 0.0, upper), best_(std::move(best)) {}
  const Matrix& best() const noexcept { return best_; }

 private:
  Matrix best_;
};

/// min { regular_norm(M, p) : M * basis = images }.
///
/// Writes M = M0 + W N^H with M0 a particular solution and N an orthonormal
/// basis of the complement of S, and solves the conic reformulation in
/// detail/barrier.hpp with a log-barrier Newton method. k = n has no freedom;
/// zero images give the zero extension.
ExtensionSolution extension_min_norm(const ExtensionProblem& prob, const ExtensionOptions& opts = {});

struct FamilySearchOptions {
  int budget = 16;  // random restarts, on top of the deterministic starts
  std::uint64_t seed = 0;
  int cap = 0;      // family size; 0 means 2 * target_m
  int iterations = 200;  // L-BFGS steps per smoothing stage
};

struct LowerBound {
  double value = 0.0;
  FamilyWitness family;  // members in the ambient space, all in S
};

/// max over explored families x_1..x_t in S of
///   || sup_i |u x_i| ||_p / || sup_i |x_i| ||_p.
///
/// Each start is a coefficient matrix C (k x t); the pointwise suprema are
/// replaced by q-norms and q is raised in stages while L-BFGS ascends the log
/// ratio. Only exact ratios are recorded. Starts are the family read off the
/// dual of `hint` (when given), the basis itself, and `budget` seeded random
/// starts, the i-th drawn from stream (seed, i), so the value is
/// nondecreasing in budget.
LowerBound subspace_regular_lowerbound(const ExtensionProblem& prob, const FamilySearchOptions& opts = {},
                                       const ExtensionSolution* hint = nullptr);

struct ExtensionReport {
  double min_extension_norm = 0.0;
  Matrix minimizer;
  double subspace_lower_bound = 0.0;
  FamilyWitness best_family;
  double gap = 0.0;  // (min - lower) / max(min, 1e-300)
};

/// Both sides of the bracket [subspace_lower_bound, min_extension_norm].
ExtensionReport verify_extension_bracket(const ExtensionProblem& prob, const ExtensionOptions& eopts = {},
                                         const FamilySearchOptions& fopts = {});

}  // namespace regop
