#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "support/cli_runner.hpp"

namespace {

namespace fs = std::filesystem;
using cli_util::run_cli;
using cli_util::RunResult;
using cli_util::scratch_dir;
using cli_util::write_file;
using nlohmann::json;

json parse_report(const RunResult& r) {
  REQUIRE(!r.out.empty());
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("validate command verdicts and exit codes") {
  auto ok = run_cli("validate --space lp --dim 3 --p 2");
  CHECK(ok.exit_code == 0);
  auto doc = parse_report(ok);
  CHECK(doc["command"] == "validate");
  CHECK(doc["status"] == "ok");
  CHECK(doc["result"]["valid"] == true);
  CHECK(doc.contains("version"));

  auto bad = run_cli("validate --space lp --dim 3 --p 1");
  CHECK(bad.exit_code == 1);
  doc = parse_report(bad);
  CHECK(doc["status"] == "fail");
  CHECK(doc["result"]["violations"].size() == 1);

  const auto spd = write_file("spd.json", "[[2,0.5],[0.5,1]]");
  auto quad = run_cli("validate --space quadratic --matrix " + spd);
  CHECK(quad.exit_code == 0);
  CHECK(parse_report(quad)["config"]["space"]["family"] == "quadratic");

  const auto indef = write_file("indef.json", "[[1,0],[0,-1]]");
  auto quad_bad = run_cli("validate --space quadratic --matrix " + indef);
  CHECK(quad_bad.exit_code == 1);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("validate --space lp --frobnicate").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("counterexample").exit_code == 2);           // missing --p
  CHECK(run_cli("counterexample --p 0.5").exit_code == 2);   // out of range
  CHECK(run_cli("validate --space quadratic --matrix /no/such/file.json").exit_code == 2);
  CHECK(run_cli("project --space lp --dim 3 --p 2 --x \"[1,2,3]\"").exit_code == 2);
  CHECK(run_cli("wedge-polar --space lp --dim 3 --p 4 --a \"[0,1,1]\" --b \"[0,2,2]\"")
            .exit_code == 2);  // dependent endpoints
}

TEST_CASE("counterexample values over p") {
  auto at = [&](const std::string& p) {
    auto r = run_cli("counterexample --p " + p);
    CHECK(r.exit_code == 0);
    return parse_report(r);
  };
  CHECK(std::abs(at("2")["result"]["det"].get<double>()) <= 1e-15);
  CHECK(std::abs(at("3")["result"]["det"].get<double>() - (2.0 - std::sqrt(2.0))) <=
        1e-15);
  CHECK(std::abs(at("1.5")["result"]["det"].get<double>() - (-2.0)) <= 1e-15);

  auto doc = at("3");
  CHECK(doc["result"]["q"] == 1.5);
  CHECK(doc["result"]["vectors"]["c"] == json::array({1.0, 1.0, 2.0}));
  CHECK(std::abs(doc["result"]["images"]["c"][2].get<double>() - std::sqrt(2.0)) <=
        1e-15);
}

TEST_CASE("criterion command verdicts") {
  auto holds = run_cli("criterion --space lp --dim 3 --p 2 --trials 50 --seed 5");
  CHECK(holds.exit_code == 0);
  auto doc = parse_report(holds);
  CHECK(doc["result"]["verdict"] == "holds");
  CHECK(doc["result"]["failure_count"] == 0);

  auto fails = run_cli("criterion --space lp --dim 3 --p 3 --trials 50 --seed 5");
  CHECK(fails.exit_code == 1);
  doc = parse_report(fails);
  CHECK(doc["status"] == "fail");
  CHECK(doc["result"]["verdict"] == "fails");
  CHECK(doc["result"]["failure_count"].get<int>() > 45);
  CHECK(!doc["result"]["failures"].empty());
  CHECK(doc["result"]["failures"][0].contains("a"));
}

TEST_CASE("project command with oracle cross-check") {
  const auto orthant = write_file("orthant.json", "[[1,0,0],[0,1,0],[0,0,1]]");
  auto r = run_cli("project --space lp --dim 3 --p 2 --cone " + orthant +
                   " --x \"[1,-2,3]\" --oracle");
  CHECK(r.exit_code == 0);
  auto doc = parse_report(r);
  CHECK(doc["result"]["converged"] == true);
  CHECK(doc["result"]["point"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc["result"]["point"][1].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(doc["result"]["oracle"]["deviation"].get<double>() <= 1e-7);

  // Feasible point: distance 0.
  auto inside = run_cli("project --space lp --dim 3 --p 4 --cone " + orthant +
                        " --x \"[1,2,3]\"");
  CHECK(inside.exit_code == 0);
  CHECK(parse_report(inside)["result"]["distance"].get<double>() <= 1e-8);

  // Strangled solver: status distinguishes the failure from a usage error.
  auto failed = run_cli("project --space lp --dim 3 --p 4 --cone " + orthant +
                        " --x \"[-1,2,-3]\" --max-iters 1 --tol 1e-14");
  CHECK(failed.exit_code == 1);
  CHECK(parse_report(failed)["status"] == "error");
}

TEST_CASE("wedge-polar command and CSV output") {
  auto convex = run_cli(
      "wedge-polar --space lp --dim 3 --p 2 --a \"[0,1,1]\" --b \"[1,0,1]\" "
      "--arc-samples 17");
  CHECK(convex.exit_code == 0);
  auto doc = parse_report(convex);
  CHECK(doc["result"]["convex"] == true);
  CHECK(doc["result"]["witness"].is_null());
  CHECK(doc["result"]["pairs_tested"] == 136);

  const fs::path csv_path = scratch_dir() / "rays.csv";
  auto nonconvex = run_cli(
      "wedge-polar --space lp --dim 3 --p 4 --a \"[0,1,1]\" --b \"[1,0,1]\" "
      "--arc-samples 17 --emit-csv " + csv_path.string());
  CHECK(nonconvex.exit_code == 1);
  doc = parse_report(nonconvex);
  CHECK(doc["status"] == "fail");
  CHECK(doc["result"]["convex"] == false);
  CHECK(doc["result"]["worst_violation"].get<double>() >= 1e-5);
  CHECK(!doc["result"]["witness"].is_null());
  CHECK(doc["result"]["witness"]["u"].size() == 3);

  std::ifstream csv(csv_path, std::ios::binary);
  std::stringstream buf;
  buf << csv.rdbuf();
  const std::string text = buf.str();
  CHECK(text.find('\r') == std::string::npos);  // LF endings only
  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,c_1,c_2,c_3,ray_1,ray_2,ray_3");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 17);
}

TEST_CASE("reports are byte-identical across repeated runs") {
  const std::string cmd =
      "criterion --space lp --dim 3 --p 3 --trials 40 --seed 123";
  const auto first = run_cli(cmd);
  const auto second = run_cli(cmd);
  CHECK(first.exit_code == second.exit_code);
  CHECK(first.out == second.out);

  const auto w1 = run_cli("wedge-polar --space lp --dim 3 --p 4 --a \"[0,1,1]\" "
                          "--b \"[1,0,1]\" --arc-samples 17");
  const auto w2 = run_cli("wedge-polar --space lp --dim 3 --p 4 --a \"[0,1,1]\" "
                          "--b \"[1,0,1]\" --arc-samples 17");
  CHECK(w1.out == w2.out);

  // --json writes exactly the stdout bytes.
  const fs::path copy = scratch_dir() / "report_copy.json";
  const auto third = run_cli(cmd + " --json " + copy.string());
  std::ifstream in(copy, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(third.out == buf.str());
}

TEST_CASE("config file supplies defaults, flags override") {
  const auto cfg = write_file(
      "run.json",
      R"({"space":"lp","dim":3,"p":3.0,"trials":25,"seed":9,"tol":1e-8})");

  const auto from_config = run_cli("criterion --config " + cfg);
  const auto from_flags =
      run_cli("criterion --space lp --dim 3 --p 3 --trials 25 --seed 9 --tol 1e-8");
  CHECK(from_config.exit_code == from_flags.exit_code);
  CHECK(from_config.out == from_flags.out);

  // Explicit flag beats the config value: p=2 holds.
  const auto overridden = run_cli("criterion --config " + cfg + " --p 2");
  CHECK(overridden.exit_code == 0);
  CHECK(parse_report(overridden)["result"]["verdict"] == "holds");
  CHECK(parse_report(overridden)["config"]["space"]["p"] == 2.0);
}
