#include "doctest.h"
#include "support.hpp"

#include "regop/extension.hpp"
#include "regop/oracle.hpp"
#include "regop/random.hpp"

using namespace regop;
using doctest::Approx;

namespace {

const double kExps[] = {1.0, 1.5, 2.0, 3.0, kInfinity};

double feasibility(const ExtensionProblem& prob, const Matrix& m) {
  return (m * prob.basis - prob.images).norm() / std::max(prob.images.norm(), 1e-300);
}

}  // namespace

TEST_CASE("full space has no freedom") {
  for (double p : kExps) {
    Rng rng(41, static_cast<std::uint64_t>(p * 4));
    ExtensionProblem prob;
    prob.p = ExponentSpec::from_p(p);
    prob.basis = Matrix::Identity(3, 3);
    prob.images = random_complex_matrix(rng, 2, 3);
    const ExtensionSolution sol = extension_min_norm(prob);
    CHECK(sol.value == Approx(regular_norm(prob.images, prob.p).value).epsilon(1e-12));
    CHECK((sol.minimizer - prob.images).norm() <= 1e-12 * prob.images.norm());
    const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
    CHECK(rep.gap <= 5e-2);
  }
}

TEST_CASE("singleton subspace: zero fill is optimal") {
  for (double p : kExps) {
    CAPTURE(p);
    Rng rng(42, static_cast<std::uint64_t>(p * 4));
    ExtensionProblem prob;
    prob.p = ExponentSpec::from_p(p);
    prob.basis = Matrix::Zero(2, 1);
    prob.basis(0, 0) = 1.0;
    prob.images = random_complex_matrix(rng, 3, 1);
    const double t = vector_p_norm(prob.images, prob.p);
    const ExtensionSolution sol = extension_min_norm(prob);
    CHECK(sol.value == Approx(t).epsilon(1e-7));
    const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
    CHECK(rep.subspace_lower_bound == Approx(t).epsilon(1e-12));
    CHECK(rep.gap <= 1e-6);
  }
}

TEST_CASE("p = 2 minimum agrees with the subgradient oracle") {
  for (int t = 0; t < 5; ++t) {
    Rng rng(43, t);
    const ExtensionProblem prob = random_extension_problem(rng, 4, 2, 3, ExponentSpec::from_p(2.0));
    const double fast = extension_min_norm(prob).value;
    CHECK(fast == Approx(oracle::extension_min_norm_p2(prob)).epsilon(1e-4));
  }
}

TEST_CASE("p = 1 on the plane agrees with the enumerated family oracle") {
  for (int t = 0; t < 10; ++t) {
    Rng rng(44, t);
    const ExtensionProblem prob = random_extension_problem(rng, 2, 1, 2, ExponentSpec::one());
    const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
    CHECK(rep.gap <= 1e-3);
    CHECK(oracle::family_search(prob, 2) == Approx(rep.min_extension_norm).epsilon(1e-3));
  }
}

TEST_CASE("family oracle never beats the minimum") {
  for (int t = 0; t < 6; ++t) {
    Rng rng(45, t);
    const ExtensionProblem prob = random_extension_problem(rng, 3, 2, 2, ExponentSpec::from_p(kExps[t % 5]));
    const double min = extension_min_norm(prob).value;
    CHECK(oracle::family_search(prob, 2) <= min * (1 + 1e-6));
  }
}

TEST_CASE("feasibility, bracket validity and the gap") {
  for (int t = 0; t < 40; ++t) {
    Rng rng(46, t);
    const Eigen::Index n = 2 + t % 5, k = 1 + t % std::min<int>(3, static_cast<int>(n) - 1), m = 1 + t % 4;
    const ExtensionProblem prob = random_extension_problem(rng, n, k, m, ExponentSpec::from_p(kExps[t % 5]));
    CAPTURE(t);
    const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
    CHECK(feasibility(prob, rep.minimizer) <= 1e-8);
    CHECK(rep.subspace_lower_bound <= rep.min_extension_norm * (1 + 1e-6));
    CHECK(rep.gap == Approx((rep.min_extension_norm - rep.subspace_lower_bound) / rep.min_extension_norm));
    CHECK(rep.gap <= 5e-2);
    // The basis itself is a family, and the search starts from it.
    const Matrix m0 = prob.images * prob.basis.completeOrthogonalDecomposition().pseudoInverse();
    CHECK(rep.subspace_lower_bound >= family_ratio(m0, FamilyWitness(prob.basis), prob.p) * (1 - 1e-12));
  }
}

TEST_CASE("restriction of a positive matrix") {
  for (int t = 0; t < 8; ++t) {
    Rng rng(47, t);
    ExtensionProblem prob;
    prob.p = ExponentSpec::from_p(kExps[t % 5]);
    const RealMatrix pm = random_nonneg_matrix(rng, 3, 4);
    prob.basis = random_complex_matrix(rng, 4, 2);
    prob.images = pm.cast<Complex>() * prob.basis;
    const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
    CHECK(rep.min_extension_norm <= regular_norm(pm, prob.p).value * (1 + 1e-9));
    const Matrix pc = pm.cast<Complex>();
    for (int f = 0; f < 5; ++f) {
      const FamilyWitness fam(prob.basis * random_complex_matrix(rng, 2, 1 + f));
      CHECK(rep.subspace_lower_bound >= family_ratio(pc, fam, prob.p) * (1 - 1e-6));
    }
  }
}

TEST_CASE("zero fill monotonicity") {
  for (int t = 0; t < 50; ++t) {
    Rng rng(48, t);
    const Matrix m = random_complex_matrix(rng, 1 + t % 4, 1 + t % 5);
    const ExponentSpec p = ExponentSpec::from_p(kExps[t % 5]);
    const double base = regular_norm(m, p).value;
    Matrix zero(m.rows(), m.cols() + 1), more(m.rows(), m.cols() + 1);
    zero << m, Matrix::Zero(m.rows(), 1);
    more << m, random_complex_matrix(rng, m.rows(), 1);
    CHECK(regular_norm(zero, p).value <= base * (1 + 1e-9));
    CHECK(regular_norm(more, p).value >= base * (1 - 1e-9));
  }
}

TEST_CASE("lower bound is nondecreasing in the budget") {
  for (int t = 0; t < 5; ++t) {
    Rng rng(49, t);
    const ExtensionProblem prob = random_extension_problem(rng, 5, 2, 3, ExponentSpec::from_p(kExps[t % 5]));
    double last = 0.0;
    for (int budget : {0, 1, 4, 16}) {
      FamilySearchOptions fo;
      fo.budget = budget;
      const double v = subspace_regular_lowerbound(prob, fo).value;
      CHECK(v >= last);
      last = v;
    }
  }
}

TEST_CASE("degenerate images") {
  Rng rng(50);
  ExtensionProblem prob = random_extension_problem(rng, 4, 2, 3, ExponentSpec::from_p(3.0));
  prob.images.setZero();
  const ExtensionReport rep = verify_extension_bracket(prob, {}, {});
  CHECK(rep.min_extension_norm == 0.0);
  CHECK(rep.subspace_lower_bound == 0.0);
  CHECK(rep.gap == 0.0);
  CHECK(rep.minimizer.norm() == 0.0);
}

TEST_CASE("rank deficient bases are rejected") {
  Rng rng(51);
  ExtensionProblem prob = random_extension_problem(rng, 4, 2, 3, ExponentSpec::from_p(2.0));
  prob.basis.col(1) = prob.basis.col(0) * Complex(0.0, 2.0);
  CHECK_THROWS_AS(extension_min_norm(prob), DomainError);
}

TEST_CASE("budget exhaustion keeps a feasible upper bound") {
  Rng rng(52);
  const ExtensionProblem prob = random_extension_problem(rng, 5, 2, 3, ExponentSpec::from_p(3.0));
  ExtensionOptions opts;
  opts.max_newton = 3;
  try {
    extension_min_norm(prob, opts);
    FAIL("expected a budget error");
  } catch (const ExtensionBudgetError& e) {
    CHECK(feasibility(prob, e.best()) <= 1e-8);
    CHECK(e.upper() == Approx(regular_norm(e.best(), prob.p).value));
    CHECK(e.upper() >= extension_min_norm(prob).value * (1 - 1e-9));
  }
}

TEST_CASE("midpoint convexity on the feasible set") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(53, t);
    const ExtensionProblem prob = random_extension_problem(rng, 4, 2, 3, ExponentSpec::from_p(kExps[t % 5]));
    const Matrix m1 = extension_min_norm(prob).minimizer;
    const Matrix pinv = prob.basis.completeOrthogonalDecomposition().pseudoInverse();
    const Matrix m2 = prob.images * pinv + random_complex_matrix(rng, 3, 4) * (Matrix::Identity(4, 4) - prob.basis * pinv);
    CHECK(feasibility(prob, m2) <= 1e-8);
    const double mid = regular_norm(Matrix(0.5 * (m1 + m2)), prob.p).value;
    CHECK(mid <= 0.5 * (regular_norm(m1, prob.p).value + regular_norm(m2, prob.p).value) * (1 + 1e-8));
  }
}
