#include "regop/hardy.hpp"

#include "regop/random.hpp"

#include <algorithm>
#include <charconv>
#include <numbers>

namespace regop {

double TorusGrid::node(int r) const { return 2.0 * std::numbers::pi * r / points; }

namespace {

double weight_factor(double weight, ExponentSpec q) { return q.is_infinity() ? 1.0 : std::pow(weight, 1.0 / q.p()); }

Matrix characters(const TorusGrid& grid, int degree) {
  Matrix v(grid.points, degree + 1);
  for (int r = 0; r < grid.points; ++r)
    for (int k = 0; k <= degree; ++k) v(r, k) = std::polar(1.0, k * grid.node(r));
  return v;
}

}  // namespace

AnalyticSubspace build_analytic_subspace(int points, int degree, ExponentSpec p) {
  if (points < 1) throw DomainError("grid needs at least one point");
  if (degree < 0 || degree >= points) {
    throw DomainError("degree must satisfy 0 <= d < N, got d = " + std::to_string(degree) +
                      ", N = " + std::to_string(points));
  }
  AnalyticSubspace s;
  s.grid.points = points;
  s.degree = degree;
  s.p = p;
  s.basis = characters(s.grid, degree) * weight_factor(s.grid.weight(), p);
  return s;
}

HardyTrialKind parse_hardy_kind(const std::string& name) {
  if (name == "random") return HardyTrialKind::Random;
  if (name == "identity") return HardyTrialKind::Identity;
  if (name == "diagonal") return HardyTrialKind::PositiveDiagonal;
  throw DomainError("unknown hardy trial kind '" + name + "'");
}

const char* hardy_kind_name(HardyTrialKind kind) {
  switch (kind) {
    case HardyTrialKind::Random: return "random";
    case HardyTrialKind::Identity: return "identity";
    case HardyTrialKind::PositiveDiagonal: return "diagonal";
  }
  return "random";
}

Matrix hardy_trial_values(const HardyConfig& cfg, int trial) {
  const AnalyticSubspace s = build_analytic_subspace(cfg.points, cfg.degree, ExponentSpec::infinity());
  Rng rng(cfg.seed, static_cast<std::uint64_t>(trial));
  switch (cfg.kind) {
    case HardyTrialKind::Identity:
      return s.basis;
    case HardyTrialKind::PositiveDiagonal: {
      RealVector d(cfg.points);
      for (int r = 0; r < cfg.points; ++r) d(r) = rng.uniform(0.5, 2.0);
      return d.cast<Complex>().asDiagonal() * s.basis;
    }
    case HardyTrialKind::Random:
      break;
  }
  if (cfg.targets < 1) throw DomainError("hardy experiment needs m >= 1");
  Matrix u = random_complex_matrix(rng, cfg.targets, cfg.degree + 1);
  return u / u.norm();
}

ExtensionProblem hardy_problem(const HardyConfig& cfg, const Matrix& values, ExponentSpec q) {
  ExtensionProblem prob;
  prob.p = q;
  prob.basis = build_analytic_subspace(cfg.points, cfg.degree, q).basis;
  prob.images = values * weight_factor(1.0 / static_cast<double>(values.rows()), q);
  return prob;
}

HardyRow hardy_row(const HardyConfig& cfg, int trial) {
  const Matrix values = hardy_trial_values(cfg, trial);
  HardyRow row;
  row.trial = trial;
  row.r_p = extension_min_norm(hardy_problem(cfg, values, cfg.p), cfg.extension).value;
  row.r_inf = extension_min_norm(hardy_problem(cfg, values, ExponentSpec::infinity()), cfg.extension).value;
  row.r_1 = extension_min_norm(hardy_problem(cfg, values, ExponentSpec::one()), cfg.extension).value;
  const double theta = cfg.p.theta();
  row.interpolated_bound = std::pow(row.r_inf, 1.0 - theta) * std::pow(row.r_1, theta);
  row.ratio = row.interpolated_bound > 0.0 ? row.r_p / row.interpolated_bound : 0.0;
  return row;
}

HardyTable hardy_experiment(const HardyConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be at least 1");
  HardyTable table;
  std::vector<double> ratios;
  for (int t = 0; t < cfg.trials; ++t) {
    table.rows.push_back(hardy_row(cfg, t));
    ratios.push_back(table.rows.back().ratio);
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t n = ratios.size();
  table.min_ratio = ratios.front();
  table.max_ratio = ratios.back();
  table.median_ratio = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  return table;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string hardy_csv(const HardyTable& table) {
  std::string out = "trial,r_p,r_inf,r_1,interpolated_bound,ratio\n";
  for (const HardyRow& r : table.rows) {
    out += std::to_string(r.trial) + "," + format_double(r.r_p) + "," + format_double(r.r_inf) + "," +
           format_double(r.r_1) + "," + format_double(r.interpolated_bound) + "," + format_double(r.ratio) + "\n";
  }
  return out;
}

}  // namespace regop
