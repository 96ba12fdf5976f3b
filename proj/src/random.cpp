#include "regop/random.hpp"

namespace regop {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_complex_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.complex_normal();
  return a;
}

RealMatrix random_nonneg_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  RealMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.uniform();
  return a;
}

ExtensionProblem random_extension_problem(Rng& rng, Eigen::Index n, Eigen::Index k, Eigen::Index m,
                                          ExponentSpec p) {
  ExtensionProblem prob;
  prob.p = p;
  prob.basis = random_complex_matrix(rng, n, k);
  prob.images = random_complex_matrix(rng, m, k);
  return prob;
}

}  // namespace regop
