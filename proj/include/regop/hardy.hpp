#pragma once

// Analytic trigonometric subspaces of a discretized torus, and the
// experiment comparing the minimal extension norm at p with the two endpoint
// extension norms of the same operator.

#include "regop/extension.hpp"

#include <string>

namespace regop {

/// Nodes t_r = 2 pi r / N, each carrying weight 1/N.
struct TorusGrid {
  int points = 8;

  double weight() const { return 1.0 / points; }
  double node(int r) const;
};

/// span { e^{i k t} : 0 <= k <= degree } inside L_p of the grid measure.
/// Coordinates carry the factor (1/N)^(1/p), so vector_p_norm of a basis
/// column is the L_p norm of the character.
struct AnalyticSubspace {
  TorusGrid grid;
  int degree = 0;
  ExponentSpec p = ExponentSpec::from_p(2.0);
  Matrix basis;  // N x (degree + 1)
};

/// Throws DomainError unless 0 <= d < N.
AnalyticSubspace build_analytic_subspace(int points, int degree, ExponentSpec p);

enum class HardyTrialKind {
  Random,            // Gaussian values at m target points, Frobenius norm 1
  Identity,          // restriction of the identity, m = N
  PositiveDiagonal,  // multiplication by d_r in [0.5, 2], m = N
};

HardyTrialKind parse_hardy_kind(const std::string& name);
const char* hardy_kind_name(HardyTrialKind kind);

struct HardyConfig {
  int points = 8;
  int degree = 3;
  int targets = 4;  // m, random trials only
  ExponentSpec p = ExponentSpec::from_p(2.0);
  int trials = 20;
  std::uint64_t seed = 0;
  HardyTrialKind kind = HardyTrialKind::Random;
  ExtensionOptions extension;
};

/// Values of the trial operator on the characters, before weighting: column
/// k holds (u e^{ikt})(s) at the target points s, which carry weight 1/m.
Matrix hardy_trial_values(const HardyConfig& cfg, int trial);

/// The extension problem for trial values U at exponent q.
ExtensionProblem hardy_problem(const HardyConfig& cfg, const Matrix& values, ExponentSpec q);

struct HardyRow {
  int trial = 0;
  double r_p = 0.0;
  double r_inf = 0.0;
  double r_1 = 0.0;
  double interpolated_bound = 0.0;  // r_inf^(1-theta) r_1^theta
  double ratio = 0.0;               // r_p / interpolated_bound
};

struct HardyTable {
  std::vector<HardyRow> rows;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
};

HardyRow hardy_row(const HardyConfig& cfg, int trial);
HardyTable hardy_experiment(const HardyConfig& cfg);

/// "trial,r_p,r_inf,r_1,interpolated_bound,ratio" followed by one line per
/// trial, numbers in shortest round-trip form.
std::string hardy_csv(const HardyTable& table);

/// Shortest decimal string that reads back as the same double.
std::string format_double(double x);

}  // namespace regop
