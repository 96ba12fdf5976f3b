#pragma once

// Vector and matrix norms on finite l_p lattices, and the regular norm
// ||A||_r = || |A| ||_{p->p}.

#include "regop/core.hpp"

#include <algorithm>

namespace regop {

/// (sum |x_i|^p)^(1/p), or max |x_i| for p = inf.
template <typename Derived>
double vector_p_norm(const Eigen::MatrixBase<Derived>& x, ExponentSpec p) {
  const RealVector a = x.cwiseAbs();
  if (a.size() == 0) return 0.0;
  const double top = a.maxCoeff();
  if (p.is_infinity()) return top;
  if (p.is_one()) return a.sum();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : a) acc += std::pow(v / top, p.p());
  return top * std::pow(acc, 1.0 / p.p());
}

/// Pointwise modulus supremum s_j = max_i |x_i(j)| of a family.
inline RealVector family_sup(const FamilyWitness& f) {
  return f.members.cwiseAbs().rowwise().maxCoeff();
}

/// || sup_i |x_i| ||_p.
inline double family_sup_norm(const FamilyWitness& f, ExponentSpec p) {
  return vector_p_norm(family_sup(f), p);
}

namespace detail {
// Row and column sums and maxima evaluated with plain loops over a fully
// materialized real matrix, so that every caller reduces in the same order.
double max_row_sum(const RealMatrix& a, Eigen::Index* argmax = nullptr);
double max_col_sum(const RealMatrix& a, Eigen::Index* argmax = nullptr);
double sum_row_max(const RealMatrix& a);
double sum_col_max(const RealMatrix& a);
}  // namespace detail

/// max_i sum_j |a_ij|: the l_inf -> l_inf operator norm.
template <typename Derived>
double a0_norm(const Eigen::MatrixBase<Derived>& a) {
  return detail::max_row_sum(entrywise_abs(a));
}

/// max_j sum_i |a_ij|: the l_1 -> l_1 operator norm.
template <typename Derived>
double a1_norm(const Eigen::MatrixBase<Derived>& a) {
  return detail::max_col_sum(entrywise_abs(a));
}

/// sum_i max_j |b_ij|, the norm dual to a0_norm.
template <typename Derived>
double b0_norm(const Eigen::MatrixBase<Derived>& b) {
  return detail::sum_row_max(entrywise_abs(b));
}

/// sum_j max_i |b_ij|, the norm dual to a1_norm.
template <typename Derived>
double b1_norm(const Eigen::MatrixBase<Derived>& b) {
  return detail::sum_col_max(entrywise_abs(b));
}

/// Certified p -> p norm of a nonnegative matrix M.
///
/// `value` is attained: value = ||M x||_p with ||x||_p = 1, and <y, M x> =
/// value with ||y||_{p'} = 1. `upper` is a Schur-test upper bound, so the true
/// norm lies in [value, upper].
struct NormWitness {
  double value = 0.0;
  double upper = 0.0;
  RealVector maximizer;  // x
  RealVector dual;       // y
  int iterations = 0;

  double residual() const { return upper - value; }
};

struct PowerOptions {
  double tol = 1e-9;  // relative bracket width
  int max_iterations = 10000;
  int random_starts = 8;
  std::uint64_t seed = 0;
};

/// sup { ||M x||_p : x >= 0, ||x||_p = 1 } for an entrywise nonnegative M.
///
/// Endpoints are closed forms (max column sum at p = 1, max row sum at
/// p = inf). For 1 < p < inf this runs the nonlinear power iteration
///   x <- normalize((M^T (M x)^(p-1))^(1/(p-1)))
/// from the all-ones vector and then seeded random positive starts, until the
/// bracket [||Mx||_p, max_j ((M^T (Mx)^(p-1))_j / x_j^(p-1))^(1/p)] is
/// narrower than tol * value. Throws BudgetError if no start closes the
/// bracket within max_iterations.
NormWitness nonneg_operator_p_norm(const RealMatrix& m, ExponentSpec p, const PowerOptions& opts = {});

/// ||A||_r on l_p, i.e. the p -> p norm of |A|. At p = 1 and p = inf the value
/// is bit-identical to a1_norm(A) and a0_norm(A).
template <typename Derived>
NormWitness regular_norm(const Eigen::MatrixBase<Derived>& a, ExponentSpec p, const PowerOptions& opts = {}) {
  require_finite(a, "matrix");
  return nonneg_operator_p_norm(entrywise_abs(a), p, opts);
}

/// || sup_i |A x_i| ||_p / || sup_i |x_i| ||_p. A lower bound for
/// regular_norm(A, p) for every family.
template <typename Derived>
double family_ratio(const Eigen::MatrixBase<Derived>& a, const FamilyWitness& f, ExponentSpec p) {
  if (f.dimension() != a.cols()) throw StructuralError("family members do not match operator domain");
  const double den = family_sup_norm(f, p);
  if (!(den > 0.0)) throw DomainError("family has zero supremum norm");
  const Matrix images = a.template cast<Complex>() * f.members;
  return vector_p_norm(RealVector(images.cwiseAbs().rowwise().maxCoeff()), p) / den;
}

}  // namespace regop
