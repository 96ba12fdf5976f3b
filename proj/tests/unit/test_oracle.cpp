#include "doctest.h"
#include "support.hpp"

#include "regop/norms.hpp"
#include "regop/oracle.hpp"
#include "regop/random.hpp"

using namespace regop;
using doctest::Approx;

TEST_CASE("oracle p-norm on closed cases") {
  CHECK(oracle::operator_p_norm(RealMatrix::Ones(2, 2), ExponentSpec::from_p(2.0)) == Approx(2.0).epsilon(1e-9));
  CHECK(oracle::operator_p_norm(RealMatrix::Identity(3, 3), ExponentSpec::from_p(3.0)) == Approx(1.0).epsilon(1e-9));
  const RealMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(oracle::operator_p_norm(a, ExponentSpec::one()) == Approx(6.0).epsilon(1e-9));
  CHECK(oracle::operator_p_norm(a, ExponentSpec::infinity()) == Approx(7.0).epsilon(1e-9));
  // Spectral norm of a symmetric positive matrix.
  const RealMatrix s{{2.0, 1.0}, {1.0, 2.0}};
  CHECK(oracle::operator_p_norm(s, ExponentSpec::from_p(2.0)) == Approx(3.0).epsilon(1e-9));
}

TEST_CASE("oracle Calderon norm on closed cases") {
  CHECK(oracle::calderon_norm(RealMatrix{{2.0, 0.0}, {0.0, 0.5}}, 0.3) == Approx(2.0).epsilon(1e-9));
  CHECK(oracle::calderon_norm(RealMatrix::Ones(2, 2), 0.5) == Approx(2.0).epsilon(1e-9));
  CHECK(oracle::calderon_norm(RealMatrix::Zero(2, 2), 0.5) == 0.0);
}

TEST_CASE("oracles refuse out-of-range inputs") {
  CHECK_THROWS_AS(oracle::operator_p_norm(RealMatrix::Ones(2, 4), ExponentSpec::from_p(2.0)), oracle::RefusalError);
  CHECK_THROWS_AS(oracle::operator_p_norm(RealMatrix{{-1.0}}, ExponentSpec::from_p(2.0)), DomainError);
  CHECK_THROWS_AS(oracle::calderon_norm(RealMatrix::Ones(3, 3), 0.5), oracle::RefusalError);
  Rng rng(61);
  CHECK_THROWS_AS(oracle::family_search(random_extension_problem(rng, 4, 2, 2, ExponentSpec::from_p(2.0)), 2),
                  oracle::RefusalError);
  CHECK_THROWS_AS(oracle::family_search(random_extension_problem(rng, 3, 2, 2, ExponentSpec::from_p(2.0)), 9),
                  oracle::RefusalError);
  CHECK_THROWS_AS(oracle::extension_min_norm_p2(random_extension_problem(rng, 3, 1, 2, ExponentSpec::from_p(3.0))),
                  oracle::RefusalError);
  oracle::GridSpec bad;
  bad.resolution = 1;
  CHECK_THROWS_AS(oracle::operator_p_norm(RealMatrix::Ones(2, 2), ExponentSpec::from_p(2.0), bad), DomainError);
}

TEST_CASE("oracle family search on a singleton subspace") {
  ExtensionProblem prob;
  prob.p = ExponentSpec::from_p(3.0);
  prob.basis = Matrix::Zero(3, 1);
  prob.basis(1, 0) = 2.0;
  prob.images = Matrix::Ones(2, 1);
  CHECK(oracle::family_search(prob, 3) == Approx(std::pow(2.0, 1.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("oracle p = 2 extension on the full space") {
  Rng rng(62);
  ExtensionProblem prob;
  prob.basis = Matrix::Identity(3, 3);
  prob.images = random_complex_matrix(rng, 2, 3);
  CHECK(oracle::extension_min_norm_p2(prob) == Approx(regular_norm(prob.images, prob.p).value).epsilon(1e-9));
}
