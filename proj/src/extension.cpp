#include "regop/extension.hpp"

#include "detail/barrier.hpp"

#include <cstdio>

namespace regop {

namespace {

// y x^T with the phases of m; conj of each row is the extremal family member
// for that row when S is the whole space.
Matrix witness_dual(const Matrix& m, const NormWitness& w) {
  Matrix d(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double a = std::abs(m(i, j));
      d(i, j) = w.dual(i) * w.maximizer(j) * (a > 0.0 ? m(i, j) / a : Complex(1.0));
    }
  }
  return d;
}

std::string format_gap(double g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", g);
  return buf;
}

}  // namespace

ExtensionSolution extension_min_norm(const ExtensionProblem& prob, const ExtensionOptions& opts) {
  prob.validate();
  const Eigen::Index n = prob.ambient_n(), k = prob.dimension(), m = prob.target_m();
  ExtensionSolution sol;
  if (prob.images.cwiseAbs().maxCoeff() == 0.0) {
    sol.minimizer = Matrix::Zero(m, n);
    return sol;
  }

  // basis = Q1 R1, so M0 = images R1^-1 Q1^H satisfies M0 basis = images and
  // the trailing columns of Q span the complement of S.
  const Eigen::HouseholderQR<Matrix> qr(prob.basis);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r1 = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Matrix rinv = r1.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Matrix m0 = prob.images * rinv * q.leftCols(k).adjoint();

  if (k == n) {
    const NormWitness w = regular_norm(m0, prob.p, opts.norm);
    sol.value = w.value;
    sol.minimizer = m0;
    sol.conic_gap = w.upper - w.value;
    sol.dual = witness_dual(m0, w);
    return sol;
  }

  const double scale = m0.cwiseAbs().maxCoeff();
  const detail::ConicSolution cs =
      detail::solve_extension_conic(m0 / scale, q.rightCols(n - k), prob.p, opts.rel_gap, opts.max_newton);
  sol.minimizer = cs.m * scale;
  sol.value = regular_norm(sol.minimizer, prob.p, opts.norm).value;
  sol.conic_gap = cs.gap * scale;
  sol.dual = cs.psi;
  sol.newton_steps = cs.steps;
  if (!cs.converged) {
    throw ExtensionBudgetError("extension solver stopped with relative gap " + format_gap(cs.gap / cs.objective),
                               sol.value, sol.minimizer);
  }
  return sol;
}

ExtensionReport verify_extension_bracket(const ExtensionProblem& prob, const ExtensionOptions& eopts,
                                         const FamilySearchOptions& fopts) {
  const ExtensionSolution sol = extension_min_norm(prob, eopts);
  const LowerBound lb = subspace_regular_lowerbound(prob, fopts, &sol);
  ExtensionReport rep;
  rep.min_extension_norm = sol.value;
  rep.minimizer = sol.minimizer;
  rep.subspace_lower_bound = lb.value;
  rep.best_family = lb.family;
  rep.gap = (rep.min_extension_norm - rep.subspace_lower_bound) / std::max(rep.min_extension_norm, 1e-300);
  return rep;
}

}  // namespace regop
