#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "json_canon.hpp"
#include "polarcone/polar.hpp"
#include "polarcone/projection.hpp"
#include "polarcone/random.hpp"
#include "polarcone/spaces.hpp"
#include "polarcone/version.hpp"

namespace pc = polarcone;
using nlohmann::ordered_json;
using polarcone_cli::dump_canonical;
using polarcone_cli::format_double;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ordered_json matrix_json(const Eigen::MatrixXd& A) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    rows.push_back(vector_json(A.row(i).transpose()));
  }
  return rows;
}

Eigen::VectorXd parse_vector(const std::string& text, const char* what) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(what) + ": not valid JSON: " + e.what());
  }
  if (!parsed.is_array() || parsed.empty()) {
    throw UsageError(std::string(what) + ": expected a nonempty JSON array");
  }
  Eigen::VectorXd v(parsed.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i].is_number()) {
      throw UsageError(std::string(what) + ": entries must be numbers");
    }
    v[static_cast<Eigen::Index>(i)] = parsed[i].get<double>();
  }
  return v;
}

nlohmann::json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw UsageError(std::string(what) + ": cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string(what) + ": " + path + " is not valid JSON: " + e.what());
  }
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& rows, const char* what) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw UsageError(std::string(what) + ": expected a JSON array of rows");
  }
  const std::size_t n = rows.size();
  const std::size_t m = rows[0].size();
  Eigen::MatrixXd A(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != m) {
      throw UsageError(std::string(what) + ": ragged rows");
    }
    for (std::size_t j = 0; j < m; ++j) {
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return A;
}

// Flags shared by every command that takes a space.
struct SpaceFlags {
  std::string family;
  int dim = 3;
  double p = 2.0;
  std::string matrix_file;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--space", family, "Norm family: lp or quadratic")
        ->check(CLI::IsMember({"lp", "quadratic"}));
    cmd->add_option("--dim", dim, "Dimension (lp family)");
    cmd->add_option("--p", p, "Exponent p, 1<p<inf (lp family)");
    cmd->add_option("--matrix", matrix_file,
                    "JSON file with a row-major SPD matrix (quadratic family)");
  }

  pc::SpaceSpec resolve() const {
    if (family == "lp") return pc::SpaceSpec::lp(dim, p);
    if (family == "quadratic") {
      if (matrix_file.empty()) {
        throw UsageError("--matrix is required for the quadratic family");
      }
      return pc::SpaceSpec::quadratic(
          parse_matrix(load_json_file(matrix_file, "--matrix"), "--matrix"));
    }
    throw UsageError("--space must be given (lp or quadratic)");
  }
};

ordered_json space_json(const pc::SpaceSpec& spec) {
  ordered_json out;
  if (const auto* lp = std::get_if<pc::LpSpec>(&spec.family)) {
    out["family"] = "lp";
    out["dim"] = lp->dim;
    out["p"] = lp->exponent;
  } else {
    const auto& quad = std::get<pc::QuadraticSpec>(spec.family);
    out["family"] = "quadratic";
    out["dim"] = static_cast<int>(quad.matrix.rows());
    out["matrix"] = matrix_json(quad.matrix);
  }
  return out;
}

// Config-file precedence: a JSON object whose keys are long option names
// (hyphens replaced by underscores); explicit command-line flags win.
class ConfigLayer {
 public:
  ConfigLayer(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (!path.empty()) {
      values_ = load_json_file(path, "--config");
      if (!values_.is_object()) throw UsageError("--config: expected a JSON object");
    }
  }

  template <typename T>
  void apply(const std::string& flag, const std::string& key, T& var) const {
    if (cmd_->count(flag) > 0) return;
    if (!values_.contains(key)) return;
    try {
      var = values_[key].get<T>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError("--config: bad value for \"" + key + "\"");
    }
  }

 private:
  CLI::App* cmd_;
  nlohmann::json values_ = nlohmann::json::object();
};

int emit(const std::string& command, ordered_json config, const std::string& status,
         ordered_json result, const std::string& json_path, int exit_code) {
  ordered_json doc;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["status"] = status;
  doc["result"] = std::move(result);
  doc["version"] = pc::kVersion;
  const std::string text = dump_canonical(doc);
  std::cout << text;
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw UsageError("--json: cannot write " + json_path);
    out << text;
  }
  return exit_code;
}

// ---- validate ----------------------------------------------------------

struct ValidateArgs {
  SpaceFlags space;
  std::string config_file, json_file;
};

int run_validate(const ValidateArgs& args, CLI::App* cmd) {
  ConfigLayer cfg(cmd, args.config_file);
  SpaceFlags flags = args.space;
  cfg.apply("--space", "space", flags.family);
  cfg.apply("--dim", "dim", flags.dim);
  cfg.apply("--p", "p", flags.p);
  cfg.apply("--matrix", "matrix", flags.matrix_file);

  const pc::SpaceSpec spec = flags.resolve();
  const auto violations = pc::validate_space(spec);

  ordered_json config;
  config["space"] = space_json(spec);
  ordered_json result;
  result["valid"] = violations.empty();
  result["violations"] = violations;
  return emit("validate", config, violations.empty() ? "ok" : "fail", result,
              args.json_file, violations.empty() ? kExitOk : kExitFail);
}

// ---- criterion ---------------------------------------------------------

struct CriterionArgs {
  SpaceFlags space;
  int trials = 500;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string config_file, json_file;
};

int run_criterion(const CriterionArgs& args, CLI::App* cmd) {
  ConfigLayer cfg(cmd, args.config_file);
  CriterionArgs a = args;
  cfg.apply("--space", "space", a.space.family);
  cfg.apply("--dim", "dim", a.space.dim);
  cfg.apply("--p", "p", a.space.p);
  cfg.apply("--matrix", "matrix", a.space.matrix_file);
  cfg.apply("--trials", "trials", a.trials);
  cfg.apply("--seed", "seed", a.seed);
  cfg.apply("--tol", "tol", a.tol);

  const pc::SpaceSpec spec = a.space.resolve();
  pc::Space space(spec);
  const auto report = pc::subspace_criterion_check(space, a.trials, a.tol, a.seed);

  ordered_json config;
  config["space"] = space_json(spec);
  config["trials"] = a.trials;
  config["seed"] = a.seed;
  config["tol"] = a.tol;

  ordered_json failures = ordered_json::array();
  for (const auto& f : report.failures) {
    ordered_json entry;
    entry["trial"] = f.trial;
    entry["residual"] = f.residual;
    entry["a"] = vector_json(f.a.coords);
    entry["b"] = vector_json(f.b.coords);
    entry["c"] = vector_json(f.c.coords);
    failures.push_back(entry);
  }
  ordered_json result;
  result["verdict"] = report.holds ? "holds" : "fails";
  result["trials"] = report.trials;
  result["max_residual"] = report.max_residual;
  result["failure_count"] = report.failure_count;
  result["failures"] = failures;
  return emit("criterion", config, report.holds ? "ok" : "fail", result, a.json_file,
              report.holds ? kExitOk : kExitFail);
}

// ---- counterexample ----------------------------------------------------

struct CounterexampleArgs {
  double p = 0.0;
  std::string config_file, json_file;
};

int run_counterexample(const CounterexampleArgs& args, CLI::App* cmd) {
  ConfigLayer cfg(cmd, args.config_file);
  CounterexampleArgs a = args;
  cfg.apply("--p", "p", a.p);

  pc::LpCounterexample ce;
  try {
    ce = pc::lp_counterexample(a.p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const char* names[3] = {"a", "b", "c"};
  std::ostringstream table;
  table << "l_p counterexample triple at p=" << a.p << " (q=" << ce.q << ")\n";
  for (int i = 0; i < 3; ++i) {
    table << "  " << names[i] << " = (" << ce.vectors[i].transpose()
          << ")   J* direction = (" << ce.images[i].transpose() << ")\n";
  }
  table << "  det of image directions = " << ce.det_value
        << (ce.det_value == 0.0 ? "  (dependent: p = 2)\n" : "  (independent)\n");
  std::cerr << table.str();

  ordered_json config;
  config["p"] = a.p;
  ordered_json result;
  result["p"] = ce.p;
  result["q"] = ce.q;
  result["det"] = ce.det_value;
  ordered_json vectors, images;
  for (int i = 0; i < 3; ++i) {
    vectors[names[i]] = vector_json(ce.vectors[i]);
    images[names[i]] = vector_json(ce.images[i]);
  }
  result["vectors"] = vectors;
  result["images"] = images;
  return emit("counterexample", config, "ok", result, a.json_file, kExitOk);
}

// ---- project -----------------------------------------------------------

struct ProjectArgs {
  SpaceFlags space;
  std::string cone_file;
  std::string x_text;
  double tol = 1e-8;
  int max_iters = 50000;
  bool oracle = false;
  std::string config_file, json_file;
};

int run_project(const ProjectArgs& args, CLI::App* cmd) {
  ConfigLayer cfg(cmd, args.config_file);
  ProjectArgs a = args;
  cfg.apply("--space", "space", a.space.family);
  cfg.apply("--dim", "dim", a.space.dim);
  cfg.apply("--p", "p", a.space.p);
  cfg.apply("--matrix", "matrix", a.space.matrix_file);
  cfg.apply("--cone", "cone", a.cone_file);
  cfg.apply("--x", "x", a.x_text);
  cfg.apply("--tol", "tol", a.tol);
  cfg.apply("--max-iters", "max_iters", a.max_iters);
  cfg.apply("--oracle", "oracle", a.oracle);

  if (a.cone_file.empty()) throw UsageError("--cone is required");
  if (a.x_text.empty()) throw UsageError("--x is required");

  const pc::SpaceSpec spec = a.space.resolve();
  pc::Space space(spec);

  const auto cone_rows = load_json_file(a.cone_file, "--cone");
  const Eigen::MatrixXd G = parse_matrix(cone_rows, "--cone");
  std::vector<pc::PrimalVec> gens;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    gens.push_back(pc::PrimalVec{G.row(i).transpose()});
  }
  pc::FiniteCone cone;
  pc::PrimalVec x{parse_vector(a.x_text, "--x")};
  pc::SolverOptions opts;
  opts.tol = a.tol;
  opts.max_iters = a.max_iters;
  pc::ProjectionResult result;
  try {
    cone = pc::FiniteCone::make(std::move(gens));
    result = pc::project_cone(space, cone, x, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ordered_json config;
  config["space"] = space_json(spec);
  config["cone"] = matrix_json(G);
  config["x"] = vector_json(x.coords);
  config["tol"] = a.tol;
  config["max_iters"] = a.max_iters;
  config["oracle"] = a.oracle;

  ordered_json res;
  res["converged"] = result.converged;
  res["point"] = vector_json(result.point.coords);
  res["coefficients"] = vector_json(result.coefficients);
  res["distance"] = result.distance;
  res["iterations"] = result.iterations;
  res["kkt_residual"] = result.kkt_residual;
  res["warning"] = result.warning;
  if (a.oracle) {
    pc::PrimalVec exact;
    try {
      exact = pc::euclidean_qp_oracle(cone, x);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ordered_json oracle;
    oracle["point"] = vector_json(exact.coords);
    oracle["deviation"] = (exact.coords - result.point.coords).norm();
    res["oracle"] = oracle;
  }
  return emit("project", config, result.converged ? "ok" : "error", res, a.json_file,
              result.converged ? kExitOk : kExitFail);
}

// ---- wedge-polar -------------------------------------------------------

struct WedgeArgs {
  SpaceFlags space;
  std::string a_text, b_text;
  int arc_samples = 65;
  double tol = 1e-6;
  std::string emit_csv;
  std::string config_file, json_file;
};

int run_wedge_polar(const WedgeArgs& args, CLI::App* cmd) {
  ConfigLayer cfg(cmd, args.config_file);
  WedgeArgs a = args;
  cfg.apply("--space", "space", a.space.family);
  cfg.apply("--dim", "dim", a.space.dim);
  cfg.apply("--p", "p", a.space.p);
  cfg.apply("--matrix", "matrix", a.space.matrix_file);
  cfg.apply("--a", "a", a.a_text);
  cfg.apply("--b", "b", a.b_text);
  cfg.apply("--arc-samples", "arc_samples", a.arc_samples);
  cfg.apply("--tol", "tol", a.tol);
  cfg.apply("--emit-csv", "emit_csv", a.emit_csv);

  if (a.a_text.empty() || a.b_text.empty()) {
    throw UsageError("--a and --b are required");
  }

  const pc::SpaceSpec spec = a.space.resolve();
  pc::Space space(spec);
  pc::MeridianArc arc;
  try {
    arc = pc::MeridianArc::make(space, pc::DualVec{parse_vector(a.a_text, "--a")},
                                pc::DualVec{parse_vector(a.b_text, "--b")});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ordered_json config;
  config["space"] = space_json(spec);
  config["a"] = vector_json(arc.endpoint_a.coords);
  config["b"] = vector_json(arc.endpoint_b.coords);
  config["arc_samples"] = a.arc_samples;
  config["tol"] = a.tol;
  config["emit_csv"] = a.emit_csv;

  pc::WedgeCertifyOptions opts;
  opts.tol = a.tol;
  pc::ConvexityReport report;
  try {
    report = pc::certify_wedge_polar_convexity(space, arc, a.arc_samples, opts);
  } catch (const std::runtime_error& e) {
    ordered_json res;
    res["error"] = e.what();
    return emit("wedge-polar", config, "error", res, a.json_file, kExitFail);
  }

  if (!a.emit_csv.empty()) {
    const auto samples = pc::sample_arc(space, arc, a.arc_samples);
    const auto rays = pc::wedge_polar_rays(space, arc, a.arc_samples);
    std::ofstream csv(a.emit_csv, std::ios::binary);
    if (!csv) throw UsageError("--emit-csv: cannot write " + a.emit_csv);
    csv << "t";
    for (int i = 1; i <= space.dim(); ++i) csv << ",c_" << i;
    for (int i = 1; i <= space.dim(); ++i) csv << ",ray_" << i;
    csv << "\n";
    for (int i = 0; i < a.arc_samples; ++i) {
      csv << format_double(static_cast<double>(i) / (a.arc_samples - 1));
      for (Eigen::Index k = 0; k < space.dim(); ++k) {
        csv << "," << format_double(samples[i].coords[k]);
      }
      for (Eigen::Index k = 0; k < space.dim(); ++k) {
        csv << "," << format_double(rays[i].coords[k]);
      }
      csv << "\n";
    }
  }

  ordered_json res;
  res["convex"] = report.convex;
  res["worst_violation"] = report.worst_violation;
  res["planarity_residual"] = report.planarity_residual;
  res["pairs_tested"] = report.pairs_tested;
  res["rays_sampled"] = report.rays_sampled;
  if (report.witness.has_value()) {
    ordered_json witness;
    witness["u"] = vector_json(report.witness->u.coords);
    witness["v"] = vector_json(report.witness->v.coords);
    witness["midpoint_margin"] = report.witness->midpoint_margin;
    res["witness"] = witness;
  } else {
    res["witness"] = nullptr;
  }
  return emit("wedge-polar", config, report.convex ? "ok" : "fail", res, a.json_file,
              report.convex ? kExitOk : kExitFail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar cones, duality maps and metric projections in l_p and "
               "quadratic norms"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check norm-family invariants");
  validate_args.space.add_options(validate);
  validate->add_option("--config", validate_args.config_file, "JSON config file");
  validate->add_option("--json", validate_args.json_file, "Also write the report here");

  CriterionArgs criterion_args;
  auto* criterion = app.add_subcommand(
      "criterion", "Randomized check that J* preserves two-dimensional spans");
  criterion_args.space.add_options(criterion);
  criterion->add_option("--trials", criterion_args.trials, "Random trials");
  criterion->add_option("--seed", criterion_args.seed, "RNG seed");
  criterion->add_option("--tol", criterion_args.tol, "Rank residual tolerance");
  criterion->add_option("--config", criterion_args.config_file, "JSON config file");
  criterion->add_option("--json", criterion_args.json_file, "Also write the report here");

  CounterexampleArgs ce_args;
  auto* counterexample = app.add_subcommand(
      "counterexample", "Closed-form l_p triple whose J* images are dependent iff p=2");
  counterexample->add_option("--p", ce_args.p, "Exponent p, 1<p<inf")->required();
  counterexample->add_option("--config", ce_args.config_file, "JSON config file");
  counterexample->add_option("--json", ce_args.json_file, "Also write the report here");

  ProjectArgs project_args;
  auto* project = app.add_subcommand("project", "Metric projection onto a cone");
  project_args.space.add_options(project);
  project->add_option("--cone", project_args.cone_file,
                      "JSON file: one generator per row");
  project->add_option("--x", project_args.x_text, "Point as a JSON array");
  project->add_option("--tol", project_args.tol, "Solver tolerance");
  project->add_option("--max-iters", project_args.max_iters, "Iteration budget");
  project->add_flag("--oracle", project_args.oracle,
                    "Cross-check against the exact Euclidean oracle");
  project->add_option("--config", project_args.config_file, "JSON config file");
  project->add_option("--json", project_args.json_file, "Also write the report here");

  WedgeArgs wedge_args;
  auto* wedge = app.add_subcommand("wedge-polar",
                                   "Certify convexity of a wedge polar");
  wedge_args.space.add_options(wedge);
  wedge->add_option("--a", wedge_args.a_text, "First dual endpoint, JSON array");
  wedge->add_option("--b", wedge_args.b_text, "Second dual endpoint, JSON array");
  wedge->add_option("--arc-samples", wedge_args.arc_samples, "Arc discretization");
  wedge->add_option("--tol", wedge_args.tol, "Certification tolerance");
  wedge->add_option("--emit-csv", wedge_args.emit_csv,
                    "Write sampled arc and polar rays as CSV");
  wedge->add_option("--config", wedge_args.config_file, "JSON config file");
  wedge->add_option("--json", wedge_args.json_file, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(validate_args, validate);
    if (criterion->parsed()) return run_criterion(criterion_args, criterion);
    if (counterexample->parsed()) return run_counterexample(ce_args, counterexample);
    if (project->parsed()) return run_project(project_args, project);
    if (wedge->parsed()) return run_wedge_polar(wedge_args, wedge);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
