#pragma once

// Calderon product norms for the couple (A0, A1) of max-row-sum and
// max-column-sum matrix norms, and the dual pairings that bound them from
// below.
//
// For 0 < theta < 1 the Calderon norm of A is
//
//   inf { a0_norm(f0)^(1-theta) * a1_norm(f1)^theta :
//         |a_ij| <= f0_ij^(1-theta) f1_ij^theta }
//
// and coincides with the regular norm of A on l_p, p = 1/theta. Both sides are
// computed independently here and compared by verify_interpolation_identity.

#include "regop/norms.hpp"

namespace regop {

/// Entrywise decomposition certifying an upper bound on the Calderon norm.
struct Factorization {
  double theta = 0.5;
  RealMatrix f0;
  RealMatrix f1;
  double bound = 0.0;
};

/// Element b of the unit ball of the dual Calderon product, split as
/// |b_ij| = b0_ij * b1_ij with sum_i (max_j b0_ij)^p' <= 1 and
/// sum_j (max_i b1_ij)^p <= 1. Its pairing sum |a_ij b_ij| is a lower bound
/// for the regular norm of A.
struct DualWitness {
  Matrix b;
  RealMatrix b0;
  RealMatrix b1;
  double theta = 0.5;
  double pairing = 0.0;
};

struct CalderonOptions {
  double tol = 1e-6;
  // Start from the Schur weights of a converged p-norm witness; otherwise
  // from the balanced factorization f0 = f1 = |A|.
  bool warm_start = true;
  int max_iterations = 5000;  // per smoothing stage
  PowerOptions norm;
};

struct CalderonResult {
  double value = 0.0;
  Factorization cert;
  int iterations = 0;
};

/// Thrown when the last smoothing stage exhausts its iterations. Carries the
/// best certificate found, which is still valid.
class CalderonBudgetError : public BudgetError {
 public:
  CalderonBudgetError(const std::string& what, Factorization best)
      : BudgetError(what, 0.0, best.bound), best_(std::move(best)) {}
  const Factorization& best() const noexcept { return best_; }

 private:
  Factorization best_;
};

namespace detail {
CalderonResult calderon_norm_abs(const RealMatrix& abs_a, double theta, const CalderonOptions& opts);
}

/// Minimizes a0_norm(f0)^(1-theta) a1_norm(f1)^theta over factorizations of A.
///
/// The constraint is imposed with equality on the support of A, which leaves
/// u = log f0 as the only unknowns:
///
///   g(u) = (1-theta) log max_i sum_j e^{u_ij}
///        + theta log max_j sum_i e^{(log|a_ij| - (1-theta) u_ij) / theta}.
///
/// g is convex. The two maxima are smoothed with a softmax of decreasing
/// temperature and each stage is solved with L-BFGS; the best exact g seen is
/// kept. The certificate is rescaled so a0_norm(f0) = a1_norm(f1).
template <typename Derived>
CalderonResult calderon_norm(const Eigen::MatrixBase<Derived>& a, double theta, const CalderonOptions& opts = {}) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  require_finite(a, "matrix");
  return detail::calderon_norm_abs(entrywise_abs(a), theta, opts);
}

struct FactorizationCheck {
  double residual = 0.0;          // max over supp A of (log|a| - (1-t) log f0 - t log f1)_+
  double recomputed_bound = 0.0;  // a0_norm(f0)^(1-t) a1_norm(f1)^t
  bool accepted = false;
};

FactorizationCheck verify_factorization_abs(const RealMatrix& abs_a, const Factorization& cert);

/// Accepts iff residual <= 1e-9 and recomputed_bound <= cert.bound * (1 + 1e-9).
template <typename Derived>
FactorizationCheck verify_factorization(const Eigen::MatrixBase<Derived>& a, const Factorization& cert) {
  return verify_factorization_abs(entrywise_abs(a), cert);
}

/// b_ij = y_i x_j conj(phase(a_ij)) with b0_ij = y_i and b1_ij = x_j, where
/// (x, y) is the witness of ||A||_r at p = 1/theta. Its pairing with A equals
/// the witness value.
DualWitness dual_witness_from_norm_witness(const Matrix& a, const NormWitness& w, double theta);

/// sum |a_ij b_ij|. Throws DomainError if the witness is not in the unit ball.
double dual_pairing(const Matrix& a, const DualWitness& dw);

/// Throws DomainError describing the first violated witness constraint.
void check_dual_witness(const DualWitness& dw);

struct InterpolationReport {
  double theta = 0.5;
  double regular = 0.0;           // ||A||_r on l_p, p = 1/theta
  double calderon = 0.0;          // Calderon product norm
  double pairing = 0.0;           // dual witness lower bound
  double endpoint_product = 0.0;  // a0_norm^(1-theta) a1_norm^theta
  double tol = 0.0;
  bool passed = false;

  double relative_gap() const { return regular > 0.0 ? std::abs(calderon - regular) / regular : std::abs(calderon); }
};

/// Computes the regular norm, the Calderon norm and a dual pairing
/// independently and checks pairing <= regular <= calderon <= endpoint
/// product with |calderon - regular| <= tol * regular.
InterpolationReport verify_interpolation_identity(const Matrix& a, double theta, double tol = 1e-6,
                                                  const CalderonOptions& opts = {});

}  // namespace regop
