#include "doctest.h"
#include "support.hpp"

#include "regop/norms.hpp"
#include "regop/oracle.hpp"
#include "regop/random.hpp"

using namespace regop;
using doctest::Approx;
using regop::testing::mat;

namespace {
const double kExps[] = {1.0, 1.25, 1.5, 2.0, 3.0, 7.0, kInfinity};
}

TEST_CASE("vector_p_norm") {
  CHECK(vector_p_norm(RealVector{{3.0, 4.0}}, ExponentSpec::from_p(2.0)) == Approx(5.0));
  CHECK(vector_p_norm(RealVector{{1.0, 1.0, 1.0}}, ExponentSpec::infinity()) == 1.0);
  CHECK(vector_p_norm(RealVector{{1.0, -2.0, 2.0}}, ExponentSpec::one()) == 5.0);
  // No overflow at large p.
  CHECK(vector_p_norm(RealVector{{1e200, 1e200}}, ExponentSpec::from_p(50.0)) == Approx(1e200 * std::pow(2.0, 0.02)));
}

TEST_CASE("family_sup_norm") {
  const FamilyWitness units(Matrix(Matrix::Identity(2, 2)));
  CHECK(family_sup_norm(units, ExponentSpec::one()) == 2.0);

  const Matrix x = mat({{1.0}, {Complex(0.0, -2.0)}, {0.5}});
  CHECK(family_sup_norm(FamilyWitness(x), ExponentSpec::from_p(3.0)) == vector_p_norm(x, ExponentSpec::from_p(3.0)));

  const FamilyWitness f(mat({{1.0, 0.0, 1.0}, {0.0, -1.0, 1.0}}));
  CHECK(family_sup_norm(f, ExponentSpec::infinity()) == 1.0);
}

TEST_CASE("A and B norms") {
  const Matrix a = mat({{1.0, -2.0}, {3.0, 4.0}});
  CHECK(a0_norm(a) == 7.0);
  CHECK(a1_norm(a) == 6.0);
  CHECK(a0_norm(Matrix(Matrix::Identity(4, 4))) == 1.0);
  CHECK(a1_norm(Matrix(Matrix::Identity(4, 4))) == 1.0);
  CHECK(a0_norm(Matrix(Matrix::Zero(2, 3))) == 0.0);

  const Matrix b = mat({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(b0_norm(b) == 6.0);
  CHECK(b1_norm(b) == 7.0);
  CHECK(b0_norm(Matrix(Matrix::Identity(5, 5))) == 5.0);
  CHECK(b1_norm(Matrix(Matrix::Identity(5, 5))) == 5.0);
  CHECK(b1_norm(transpose(b)) == b0_norm(b));
}

TEST_CASE("operator norm closed cases") {
  for (double p : kExps) {
    CAPTURE(p);
    const ExponentSpec e = ExponentSpec::from_p(p);
    CHECK(nonneg_operator_p_norm(RealMatrix::Identity(4, 4), e).value == Approx(1.0).epsilon(1e-9));
    for (int n = 1; n <= 4; ++n) CHECK(nonneg_operator_p_norm(RealMatrix::Ones(n, n), e).value == Approx(n).epsilon(1e-9));
    CHECK(regular_norm(Matrix(RealVector{{0.5, -3.0, 2.0}}.cast<Complex>().asDiagonal()), e).value ==
          Approx(3.0).epsilon(1e-9));
    const NormWitness zero = nonneg_operator_p_norm(RealMatrix::Zero(3, 2), e);
    CHECK(zero.value == 0.0);
    CHECK(zero.maximizer(0) == 1.0);
  }
  const Matrix a = mat({{1.0, -2.0}, {3.0, 4.0}});
  CHECK(regular_norm(a, ExponentSpec::one()).value == 6.0);
  CHECK(regular_norm(a, ExponentSpec::infinity()).value == 7.0);
}

TEST_CASE("rank one: Holder extremality, confirmed by the grid oracle") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    const RealMatrix u = random_nonneg_matrix(rng, 3, 1), v = random_nonneg_matrix(rng, 3, 1);
    const RealMatrix m = u * v.transpose();
    for (double p : kExps) {
      CAPTURE(p);
      const ExponentSpec e = ExponentSpec::from_p(p);
      const double expected = vector_p_norm(u, e) * vector_p_norm(v, e.dual());
      CHECK(nonneg_operator_p_norm(m, e).value == Approx(expected).epsilon(1e-9));
      CHECK(oracle::operator_p_norm(m, e) == Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("negative entries are rejected") {
  CHECK_THROWS_AS(nonneg_operator_p_norm(RealMatrix{{1.0, -1.0}}, ExponentSpec::from_p(2.0)), DomainError);
}

TEST_CASE("endpoint exactness") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(22, t);
    const Matrix a = random_complex_matrix(rng, 1 + t % 8, 1 + (t / 8) % 8);
    CHECK(regular_norm(a, ExponentSpec::one()).value == a1_norm(a));
    CHECK(regular_norm(a, ExponentSpec::infinity()).value == a0_norm(a));
  }
}

TEST_CASE("witness consistency and transpose duality") {
  const double tol = 1e-9;
  for (int t = 0; t < 100; ++t) {
    Rng rng(23, t);
    const Matrix a = random_complex_matrix(rng, 1 + t % 8, 1 + (t / 3) % 8);
    const ExponentSpec e = ExponentSpec::from_p(kExps[t % 7]);
    CAPTURE(t);
    const NormWitness w = regular_norm(a, e);
    const RealMatrix m = entrywise_abs(a);
    CHECK(w.dual.dot(m * w.maximizer) >= w.value * (1.0 - 10 * tol));
    CHECK(vector_p_norm(w.maximizer, e) == Approx(1.0).epsilon(1e-12));
    CHECK(vector_p_norm(w.dual, e.dual()) == Approx(1.0).epsilon(1e-12));
    CHECK(w.upper >= w.value);
    CHECK(w.upper <= w.value * (1.0 + tol));
    CHECK((w.maximizer.array() >= 0.0).all());
    const double rt = regular_norm(Matrix(a.transpose()), e.dual()).value;
    CHECK(std::abs(w.value - rt) <= 2 * tol * w.value);
  }
}

TEST_CASE("monotone in the entries") {
  for (int t = 0; t < 100; ++t) {
    Rng rng(24, t);
    const RealMatrix m = random_nonneg_matrix(rng, 1 + t % 6, 1 + (t / 6) % 6);
    const RealMatrix bigger = m + random_nonneg_matrix(rng, m.rows(), m.cols()) * (t % 3 == 0 ? 1e-6 : 0.5);
    const ExponentSpec e = ExponentSpec::from_p(kExps[t % 7]);
    CHECK(nonneg_operator_p_norm(m, e).value <= nonneg_operator_p_norm(bigger, e).value + 1e-9);
  }
}

TEST_CASE("family ratios never exceed the regular norm") {
  for (int t = 0; t < 200; ++t) {
    Rng rng(25, t);
    const Eigen::Index n = 1 + t % 5;
    const Matrix a = random_complex_matrix(rng, 1 + (t / 5) % 5, n);
    const ExponentSpec e = ExponentSpec::from_p(kExps[t % 7]);
    const FamilyWitness f(random_complex_matrix(rng, n, 1 + t % 4));
    CHECK(family_ratio(a, f, e) <= regular_norm(a, e).value * (1.0 + 1e-8));
  }
}

TEST_CASE("family ratio examples") {
  Rng rng(26);
  const RealMatrix m = random_nonneg_matrix(rng, 3, 4);
  const ExponentSpec e = ExponentSpec::from_p(3.0);
  const FamilyWitness units(Matrix(Matrix::Identity(4, 4)));
  const double expected = vector_p_norm(RealVector(m.rowwise().maxCoeff()), e) / std::pow(4.0, 1.0 / 3.0);
  CHECK(family_ratio(m, units, e) == Approx(expected).epsilon(1e-12));

  const Matrix x = random_complex_matrix(rng, 4, 1);
  CHECK(family_ratio(m, FamilyWitness(x), e) ==
        Approx(vector_p_norm(Matrix(m.cast<Complex>() * x), e) / vector_p_norm(x, e)).epsilon(1e-12));

  const FamilyWitness f(random_complex_matrix(rng, 4, 3));
  CHECK(family_ratio(Matrix(Matrix::Identity(4, 4)), f, e) == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(family_ratio(m, FamilyWitness(Matrix(Matrix::Zero(4, 2))), e), DomainError);
}

TEST_CASE("budget exhaustion reports a bracket") {
  Rng rng(27);
  PowerOptions opts;
  opts.max_iterations = 1;
  opts.random_starts = 0;
  opts.tol = 1e-15;
  const RealMatrix m = random_nonneg_matrix(rng, 6, 6);
  try {
    nonneg_operator_p_norm(m, ExponentSpec::from_p(3.0), opts);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    const double exact = nonneg_operator_p_norm(m, ExponentSpec::from_p(3.0)).value;
    CHECK(e.lower() <= exact * (1 + 1e-12));
    CHECK(e.upper() >= exact * (1 - 1e-12));
  }
}

TEST_CASE("agrees with the grid oracle on random 3 x 3") {
  for (int t = 0; t < 20; ++t) {
    Rng rng(28, t);
    const RealMatrix m = random_nonneg_matrix(rng, 1 + t % 4, 1 + t % 3);
    const ExponentSpec e = ExponentSpec::from_p(kExps[t % 7]);
    CHECK(nonneg_operator_p_norm(m, e).value == Approx(oracle::operator_p_norm(m, e)).epsilon(1e-6));
  }
}
