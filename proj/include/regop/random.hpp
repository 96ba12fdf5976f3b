#pragma once

// Seeded instance generation. A (seed, index) pair always maps to the same
// stream, so runs are reproducible and restarts can be extended without
// perturbing earlier ones.

#include "regop/core.hpp"

#include <random>

namespace regop {

/// splitmix64 finalizer; derives independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// rows x cols with independent standard normal real and imaginary parts.
Matrix random_complex_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// rows x cols with entries uniform on [0, 1].
RealMatrix random_nonneg_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Random complex extension problem: Gaussian basis (n x k) and images (m x k).
ExtensionProblem random_extension_problem(Rng& rng, Eigen::Index n, Eigen::Index k, Eigen::Index m,
                                          ExponentSpec p);

}  // namespace regop
