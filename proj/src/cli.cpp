#include "regop/cli.hpp"

#include "regop/calderon.hpp"
#include "regop/extension.hpp"
#include "regop/hardy.hpp"
#include "regop/io.hpp"
#include "regop/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace regop::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExponentSpec parse_exponent(const std::string& text) {
  if (text == "inf") return ExponentSpec::infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !(p >= 1.0)) {
    throw UsageError("--p must be a number >= 1 or 'inf', got '" + text + "'");
  }
  return ExponentSpec::from_p(p);
}

struct Output {
  std::string path;
  std::string format = "json";

  void emit(const std::string& text, std::ostream& out) const {
    if (path.empty() || path == "-") {
      out << text;
    } else {
      write_text(path, text);
    }
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json report_header(const char* command) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  return j;
}

const CLI::Validator kOpenUnit([](std::string& s) -> std::string {
  try {
    const double t = std::stod(s);
    if (t > 0.0 && t < 1.0) return {};
  } catch (const std::exception&) {
  }
  return "theta must lie in (0, 1), got " + s;
}, "THETA in (0,1)");

void add_output(CLI::App* app, Output& o, std::vector<std::string> formats) {
  app->add_option("--out", o.path, "Report file (default: stdout)");
  app->add_option("--format", o.format, "Report format")->check(CLI::IsMember(std::move(formats)));
}

// --- norm -------------------------------------------------------------

struct NormArgs {
  std::string input;
  std::string p = "2";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  Output out;
};

int cmd_norm(const NormArgs& a, std::ostream& out) {
  const ExponentSpec p = parse_exponent(a.p);
  const Matrix m = read_matrix(a.input);
  PowerOptions po;
  po.tol = a.tol;
  po.seed = a.seed;
  const NormWitness w = regular_norm(m, p, po);
  Json j = report_header("norm");
  j["p"] = exponent_to_json(p);
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["value"] = w.value;
  j["bracket"] = Json::array({w.value, w.upper});
  j["x"] = real_vector_to_json(w.maximizer);
  j["y"] = real_vector_to_json(w.dual);
  j["iterations"] = w.iterations;
  a.out.emit(dump(j), out);
  return kExitOk;
}

// --- thm1 -------------------------------------------------------------

struct Thm1Args {
  int n = 3;
  int m = 0;
  int trials = 50;
  std::vector<std::string> theta{"0.5"};
  std::uint64_t seed = 0;
  double tol = 1e-4;
  bool nonneg = false;
  Output out;
};

int cmd_thm1(const Thm1Args& a, std::ostream& out) {
  const Eigen::Index rows = a.m > 0 ? a.m : a.n;
  Json rows_json = Json::array();
  std::string csv = "trial,theta,regular,calderon,pairing,endpoint_product,relative_gap,passed\n";
  int failures = 0, instances = 0;
  double worst = 0.0;
  for (const std::string& ts : a.theta) {
    const double theta = std::stod(ts);
    for (int t = 0; t < a.trials; ++t) {
      Rng rng(a.seed, static_cast<std::uint64_t>(t));
      const Matrix m = a.nonneg ? Matrix(random_nonneg_matrix(rng, rows, a.n).cast<Complex>())
                                : random_complex_matrix(rng, rows, a.n);
      const InterpolationReport r = verify_interpolation_identity(m, theta, a.tol);
      ++instances;
      failures += r.passed ? 0 : 1;
      worst = std::max(worst, r.relative_gap());
      Json row;
      row["trial"] = t;
      row["theta"] = theta;
      row["regular"] = r.regular;
      row["calderon"] = r.calderon;
      row["pairing"] = r.pairing;
      row["endpoint_product"] = r.endpoint_product;
      row["relative_gap"] = r.relative_gap();
      row["passed"] = r.passed;
      rows_json.push_back(std::move(row));
      csv += std::to_string(t) + "," + format_double(theta) + "," + format_double(r.regular) + "," +
             format_double(r.calderon) + "," + format_double(r.pairing) + "," + format_double(r.endpoint_product) +
             "," + format_double(r.relative_gap()) + "," + (r.passed ? "1" : "0") + "\n";
    }
  }
  if (a.out.format == "csv") {
    a.out.emit(csv, out);
  } else {
    Json j = report_header("thm1");
    j["n"] = a.n;
    j["m"] = rows;
    j["seed"] = a.seed;
    j["tol"] = a.tol;
    j["kind"] = a.nonneg ? "nonneg" : "complex";
    j["rows"] = std::move(rows_json);
    j["summary"] = {{"instances", instances}, {"failures", failures}, {"worst_relative_gap", worst}};
    a.out.emit(dump(j), out);
  }
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

// --- extend -----------------------------------------------------------

struct ExtendArgs {
  std::string input;
  double tol = 5e-2;
  int budget = 16;
  std::uint64_t seed = 0;
  Output out;
};

int cmd_extend(const ExtendArgs& a, std::ostream& out) {
  const ExtensionProblem prob = read_problem(a.input);
  FamilySearchOptions fo;
  fo.budget = a.budget;
  fo.seed = a.seed;
  const ExtensionReport r = verify_extension_bracket(prob, {}, fo);
  Json family = Json::array();
  for (Eigen::Index c = 0; c < r.best_family.size(); ++c) family.push_back(vector_to_json(r.best_family.members.col(c)));
  Json j = report_header("extend");
  j["p"] = exponent_to_json(prob.p);
  j["min"] = r.min_extension_norm;
  j["lower"] = r.subspace_lower_bound;
  j["gap"] = r.gap;
  j["minimizer"] = matrix_to_json(r.minimizer);
  j["family"] = std::move(family);
  a.out.emit(dump(j), out);
  const bool ok = r.subspace_lower_bound <= r.min_extension_norm * (1.0 + 1e-6) && r.gap <= a.tol;
  return ok ? kExitOk : kExitCheckFailed;
}

// --- hardy ------------------------------------------------------------

struct HardyArgs {
  int n = 0;
  int degree = 3;
  int m = 4;
  std::string p = "2";
  int trials = 20;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string kind = "random";
  Output out{"", "csv"};
};

int cmd_hardy(const HardyArgs& a, std::ostream& out) {
  HardyConfig cfg;
  cfg.degree = a.degree;
  cfg.points = a.n > 0 ? a.n : 4 * (a.degree + 1);
  cfg.targets = a.m;
  cfg.p = parse_exponent(a.p);
  if (!cfg.p.is_interior()) throw UsageError("hardy needs 1 < p < inf");
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.kind = parse_hardy_kind(a.kind);
  const HardyTable table = hardy_experiment(cfg);

  bool ok = true;
  for (const HardyRow& r : table.rows) {
    ok = ok && r.ratio <= 1.0 + a.tol;
    if (cfg.kind != HardyTrialKind::Random) ok = ok && std::abs(r.ratio - 1.0) <= a.tol;
  }
  if (a.out.format == "csv") {
    a.out.emit(hardy_csv(table), out);
  } else {
    Json rows = Json::array();
    for (const HardyRow& r : table.rows) {
      rows.push_back({{"trial", r.trial},
                      {"r_p", r.r_p},
                      {"r_inf", r.r_inf},
                      {"r_1", r.r_1},
                      {"interpolated_bound", r.interpolated_bound},
                      {"ratio", r.ratio}});
    }
    Json j = report_header("hardy");
    j["N"] = cfg.points;
    j["degree"] = cfg.degree;
    j["m"] = cfg.kind == HardyTrialKind::Random ? cfg.targets : cfg.points;
    j["p"] = exponent_to_json(cfg.p);
    j["kind"] = hardy_kind_name(cfg.kind);
    j["seed"] = cfg.seed;
    j["rows"] = std::move(rows);
    j["summary"] = {{"min_ratio", table.min_ratio}, {"median_ratio", table.median_ratio},
                    {"max_ratio", table.max_ratio}};
    a.out.emit(dump(j), out);
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// --- gen --------------------------------------------------------------

struct GenArgs {
  std::string kind = "matrix";
  int n = 3;
  int m = 0;
  int k = 1;
  std::string p = "2";
  std::uint64_t seed = 0;
  bool nonneg = false;
  Output out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Rng rng(a.seed);
  const Eigen::Index rows = a.m > 0 ? a.m : a.n;
  Json j;
  if (a.kind == "matrix") {
    const Matrix m =
        a.nonneg ? Matrix(random_nonneg_matrix(rng, rows, a.n).cast<Complex>()) : random_complex_matrix(rng, rows, a.n);
    j = matrix_to_json(m);
  } else {
    if (a.k > a.n) throw UsageError("--k must not exceed --n");
    const ExtensionProblem prob = random_extension_problem(rng, a.n, a.k, rows, parse_exponent(a.p));
    prob.validate();
    j = problem_to_json(prob);
  }
  a.out.emit(j.dump() + "\n", out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular operator norms, Calderon products and regular extensions on finite l_p lattices", "regop"};
  app.require_subcommand(1);

  NormArgs norm;
  CLI::App* sn = app.add_subcommand("norm", "Regular norm of a matrix with witness and bracket");
  sn->add_option("input", norm.input, "Matrix instance (JSON)")->required();
  sn->add_option("--p", norm.p, "Exponent: number >= 1 or inf");
  sn->add_option("--tol", norm.tol, "Relative bracket width")->check(CLI::PositiveNumber);
  sn->add_option("--seed", norm.seed, "Seed for random starts");
  add_output(sn, norm.out, {"json"});

  Thm1Args thm1;
  CLI::App* st = app.add_subcommand("thm1", "Regular norm against Calderon norm and dual pairing on random matrices");
  st->add_option("--n", thm1.n, "Columns")->check(CLI::Range(1, 1 << 20));
  st->add_option("--m", thm1.m, "Rows (default n)")->check(CLI::Range(1, 1 << 20));
  st->add_option("--trials", thm1.trials, "Matrices per theta")->check(CLI::Range(1, 1 << 20));
  st->add_option("--theta", thm1.theta, "Interpolation parameters")->check(kOpenUnit)->delimiter(',');
  st->add_option("--seed", thm1.seed, "Seed");
  st->add_option("--tol", thm1.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  st->add_flag("--nonneg", thm1.nonneg, "Nonnegative uniform entries instead of complex Gaussian");
  add_output(st, thm1.out, {"json", "csv"});

  ExtendArgs ext;
  CLI::App* se = app.add_subcommand("extend", "Bracket the minimal regular extension of an operator on a subspace");
  se->add_option("input", ext.input, "Extension problem (JSON)")->required();
  se->add_option("--tol", ext.tol, "Largest acceptable relative gap")->check(CLI::PositiveNumber);
  se->add_option("--budget", ext.budget, "Random restarts of the family search")->check(CLI::NonNegativeNumber);
  se->add_option("--seed", ext.seed, "Seed");
  add_output(se, ext.out, {"json"});

  HardyArgs hardy;
  CLI::App* sh = app.add_subcommand("hardy", "Extension norms on analytic subspaces of a discretized torus");
  sh->add_option("--n", hardy.n, "Grid points N (default 4 (degree + 1))")->check(CLI::Range(1, 1 << 20));
  sh->add_option("--degree", hardy.degree, "Top frequency d")->check(CLI::NonNegativeNumber);
  sh->add_option("--m", hardy.m, "Target points for random trials")->check(CLI::Range(1, 1 << 20));
  sh->add_option("--p", hardy.p, "Exponent, 1 < p < inf");
  sh->add_option("--trials", hardy.trials, "Trials")->check(CLI::Range(1, 1 << 20));
  sh->add_option("--seed", hardy.seed, "Seed");
  sh->add_option("--tol", hardy.tol, "Tolerance on ratios")->check(CLI::PositiveNumber);
  sh->add_option("--kind", hardy.kind, "Trial operators")->check(CLI::IsMember({"random", "identity", "diagonal"}));
  add_output(sh, hardy.out, {"csv", "json"});

  GenArgs gen;
  CLI::App* sg = app.add_subcommand("gen", "Seeded random instances");
  sg->add_option("--kind", gen.kind, "Instance kind")->check(CLI::IsMember({"matrix", "extprob"}));
  sg->add_option("--n", gen.n, "Columns, or ambient dimension")->check(CLI::Range(1, 1 << 20));
  sg->add_option("--m", gen.m, "Rows, or target dimension (default n)")->check(CLI::Range(1, 1 << 20));
  sg->add_option("--k", gen.k, "Subspace dimension")->check(CLI::Range(1, 1 << 20));
  sg->add_option("--p", gen.p, "Exponent of the extension problem");
  sg->add_option("--seed", gen.seed, "Seed");
  sg->add_flag("--nonneg", gen.nonneg, "Nonnegative uniform entries instead of complex Gaussian");
  add_output(sg, gen.out, {"json"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: usage: " << msg << "\n";
    return kExitUsage;
  }

  try {
    if (*sn) return cmd_norm(norm, out);
    if (*st) return cmd_thm1(thm1, out);
    if (*se) return cmd_extend(ext, out);
    if (*sh) return cmd_hardy(hardy, out);
    return cmd_gen(gen, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace regop::cli
