#pragma once

// Slow brute-force references for tests. Nothing here calls the fast solvers:
// norms of |M| at p = 2 use an SVD, the p-norm is a grid search, and the
// extension reference is plain projected subgradient.

#include "regop/core.hpp"

namespace regop::oracle {

// Input too large for an exhaustive method.
class RefusalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "refusal"; }
};

struct GridSpec {
  int resolution = 64;  // points per dimension
  double lo = -12.0;    // log-domain bounds for factorization search
  double hi = 12.0;

  void validate() const;
};

/// max ||M x||_p over the grid {0, 1/r, ..., 1}^n \ {0} normalized to the
/// p-sphere, followed by a pattern search. A lower bound. At most 3 columns.
double operator_p_norm(const RealMatrix& m, ExponentSpec p, const GridSpec& grid = {});

/// min over a log-grid of f0 on the support (one entry fixed by the gauge
/// u -> u + c) of a0(f0)^(1-theta) a1(f1)^theta, f1 from equality, followed
/// by a pattern search. An upper bound. 2 x 2 only.
double calderon_norm(const RealMatrix& a, double theta, const GridSpec& grid = {});

/// max of the family ratio over all families of at most `cap` members whose
/// coefficient vectors lie on a fixed net: moduli {0, 1/8, ..., 1} and
/// phases at 8th roots of unity. A lower bound for the regular norm of u on
/// S. ambient_n <= 3, k <= 2.
double family_search(const ExtensionProblem& prob, int cap);

/// Minimal regular norm over extensions at p = 2, by projected subgradient
/// from `starts` feasible starts. The regular norm at p = 2 is the largest
/// singular value of |M|. An upper bound.
double extension_min_norm_p2(const ExtensionProblem& prob, int iterations = 20000, int starts = 20);

}  // namespace regop::oracle
