#include "doctest.h"
#include "support.hpp"

#include "regop/cli.hpp"
#include "regop/io.hpp"

#include <sstream>

using namespace regop;
using regop::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("norm reports endpoints exactly") {
  TempDir dir;
  write_text(dir.file("a.json"), R"({"rows":2,"cols":2,"entries":[[1,0],[-2,0],[3,0],[4,0]]})");
  const Run one = run({"norm", dir.file("a.json"), "--p", "1"});
  REQUIRE(one.code == cli::kExitOk);
  const Json j = parse_json(one.out);
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["value"].get<double>() == 6.0);
  CHECK(parse_json(run({"norm", dir.file("a.json"), "--p", "inf"}).out)["value"].get<double>() == 7.0);

  run({"norm", dir.file("a.json"), "--out", dir.file("r.json")});
  CHECK(parse_json(read_text(dir.file("r.json")))["command"] == "norm");
}

TEST_CASE("thm1 passes on random instances and reports csv") {
  const Run r = run({"thm1", "--n", "3", "--trials", "4", "--theta", "0.25,0.5", "--seed", "2"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = parse_json(r.out);
  CHECK(j["summary"]["instances"] == 8);
  CHECK(j["summary"]["failures"] == 0);

  const Run csv = run({"thm1", "--n", "2", "--trials", "2", "--format", "csv", "--nonneg"});
  CHECK(csv.code == cli::kExitOk);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') >= 3);
}

TEST_CASE("gen then extend") {
  TempDir dir;
  REQUIRE(run({"gen", "--kind", "extprob", "--n", "4", "--k", "2", "--m", "3", "--p", "3", "--seed", "5", "--out",
               dir.file("e.json")})
              .code == cli::kExitOk);
  const ExtensionProblem prob = read_problem(dir.file("e.json"));
  CHECK(prob.ambient_n() == 4);
  CHECK(prob.dimension() == 2);
  const Run r = run({"extend", dir.file("e.json")});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = parse_json(r.out);
  CHECK(j["lower"].get<double>() <= j["min"].get<double>() * (1 + 1e-6));
  CHECK(j["gap"].get<double>() <= 5e-2);
}

TEST_CASE("hardy writes csv by default and json on request") {
  const Run csv = run({"hardy", "--n", "8", "--degree", "2", "--trials", "2"});
  CHECK(csv.out.rfind("trial,", 0) == 0);
  const Run json = run({"hardy", "--n", "8", "--kind", "identity", "--format", "json"});
  CHECK(json.code == cli::kExitOk);
  CHECK(parse_json(json.out)["kind"] == "identity");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"thm1", "--theta", "1.5"}).code == cli::kExitUsage);
  CHECK(run({"gen", "--n", "0"}).code == cli::kExitUsage);
  CHECK(run({"norm", "x.json", "--p", "0.5"}).code == cli::kExitUsage);
  CHECK(run({"hardy", "--kind", "spiral"}).code != cli::kExitOk);
}

TEST_CASE("input errors exit 3 with one line naming the kind") {
  TempDir dir;
  const Run missing = run({"norm", dir.file("nope.json")});
  CHECK(missing.code == cli::kExitError);
  CHECK(missing.err.rfind("error: io: ", 0) == 0);
  CHECK(std::count(missing.err.begin(), missing.err.end(), '\n') == 1);

  write_text(dir.file("bad.json"), "{");
  CHECK(run({"norm", dir.file("bad.json")}).err.rfind("error: parse: ", 0) == 0);
  write_text(dir.file("short.json"), R"({"rows":2,"cols":2,"entries":[[1,0]]})");
  CHECK(run({"norm", dir.file("short.json")}).err.rfind("error: structural: ", 0) == 0);
  CHECK(run({"hardy", "--n", "4", "--degree", "4"}).err.rfind("error: domain: ", 0) == 0);
}

TEST_CASE("repeat runs are byte-identical") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"gen", "--kind", "matrix", "--n", "3", "--seed", "8"},
           {"thm1", "--n", "2", "--trials", "3"},
           {"hardy", "--n", "8", "--trials", "2", "--seed", "4", "--p", "3"}}) {
    CHECK(run(args).out == run(args).out);
  }
  CHECK(run({"gen", "--n", "3", "--seed", "1"}).out != run({"gen", "--n", "3", "--seed", "2"}).out);
}
