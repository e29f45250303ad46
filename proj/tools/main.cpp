// Command-line front end: solve -> analyze -> fit / convergence pipelines
// with byte-stable file output.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "signorini/analysis.hpp"
#include "signorini/cases.hpp"
#include "signorini/conformal.hpp"
#include "signorini/error.hpp"
#include "signorini/format.hpp"
#include "signorini/io.hpp"
#include "signorini/pipeline.hpp"

using namespace signorini;
namespace fs = std::filesystem;

namespace {

constexpr double kKktTolerance = 1e-10;

enum Exit { kOk = 0, kInputError = 1, kSolverFailure = 2, kAnalysisFailure = 3 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::CycleDetected:
      return kSolverFailure;
    case ErrorCode::InvalidIndex:
    case ErrorCode::WindowTooNarrow:
    case ErrorCode::SingularityNotExcited:
    case ErrorCode::MissingSolution:
    case ErrorCode::NoExactSolution:
    case ErrorCode::OutOfSector:
      return kAnalysisFailure;
    default:
      return kInputError;
  }
}

int report_error(ErrorCode code, const std::string& message) {
  std::cerr << error_json(code, message) << '\n';
  return exit_code(code);
}

struct RunConfig {
  std::string problem;
  double h = 0.125;
  int levels = 1;
  std::vector<std::string> grade;
  double tol = 1e-13;
  std::string out = "out";
  double delta = 0.2;
  std::string point;
  double alpha = std::numbers::pi;
  int resolution = 256;
};

void validate(const RunConfig& cfg) {
  if (!(cfg.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "--h must be positive");
  if (cfg.levels < 1) throw Error(ErrorCode::InvalidArgument, "--levels must be at least 1");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--tol must lie in (0, 1)");
  }
}

/// "--grade cp=mu,R": cp indexes the critical points of the problem.
std::vector<GradingParams> parse_grading(const std::vector<std::string>& items,
                                         const BoundarySpec& spec) {
  const auto cps = critical_points(spec);
  std::vector<GradingParams> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const auto comma = item.find(',', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || comma == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "--grade expects cp=mu,R, got '" + item + "'");
    }
    const double index = parse_double(item.substr(0, eq));
    if (index < 0 || index >= static_cast<double>(cps.size()) || index != std::floor(index)) {
      throw Error(ErrorCode::InvalidArgument, "--grade: no critical point '" + item.substr(0, eq) + "'");
    }
    out.push_back({cps[static_cast<std::size_t>(index)].location,
                   parse_double(item.substr(eq + 1, comma - eq - 1)),
                   parse_double(item.substr(comma + 1))});
  }
  return out;
}

std::string level_file(const RunConfig& cfg, const char* stem, int level, const char* ext) {
  return (fs::path(cfg.out) / (std::string(stem) + "_L" + std::to_string(level) + ext)).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

/// Mesh, partition and stored solution of one level written by `solve`.
struct StoredLevel {
  TriMesh mesh;
  DofPartition partition;
  DiscreteSolution solution;
};

StoredLevel load_level(const RunConfig& cfg, const BoundarySpec& spec, int level) {
  const auto mesh_path = level_file(cfg, "mesh", level, ".txt");
  const auto sol_path = level_file(cfg, "solution", level, ".csv");
  std::ifstream mesh_in(mesh_path), sol_in(sol_path);
  if (!mesh_in || !sol_in) {
    throw Error(ErrorCode::MissingSolution,
                "no stored solution for level " + std::to_string(level) + " in '" + cfg.out +
                    "' (run solve first)");
  }
  StoredLevel s;
  s.mesh = read_mesh(mesh_in);
  s.partition = make_partition(s.mesh, spec);
  s.solution = read_solution_csv(sol_in, s.mesh);
  return s;
}

int cmd_solve(const RunConfig& cfg) {
  validate(cfg);
  const auto problem = read_problem(cfg.problem);
  const auto grading = parse_grading(cfg.grade, problem.spec);
  fs::create_directories(cfg.out);
  SolverOptions opts;
  opts.cg_tol = cfg.tol;
  bool certified = true;
  for (auto& mesh : build_levels(problem.spec, cfg.h, cfg.levels, grading)) {
    const int level = mesh.level;
    {
      std::ofstream m(level_file(cfg, "mesh", level, ".txt"), std::ios::binary);
      write_mesh(m, mesh);
    }
    const auto r = solve_level(problem.spec, std::move(mesh), opts);
    {
      std::ofstream s(level_file(cfg, "solution", level, ".csv"), std::ios::binary);
      write_solution_csv(s, r.mesh, r.partition, r.solution);
    }
    write_file(level_file(cfg, "trace", level, ".json"), trace_json(r.solution, r.kkt));
    const bool ok = r.kkt.scaled_max() <= kKktTolerance;
    certified = certified && ok;
    std::cout << "level " << level << ": " << r.mesh.num_nodes() << " nodes, "
              << r.solution.iterations << " active-set iterations, scaled KKT "
              << format_double(r.kkt.scaled_max()) << (ok ? "" : " (FAILED)") << '\n';
  }
  if (!certified) {
    std::cerr << error_json(ErrorCode::NoConvergence, "KKT residuals above tolerance") << '\n';
    return kSolverFailure;
  }
  return kOk;
}

int cmd_analyze(const RunConfig& cfg) {
  validate(cfg);
  if (!(cfg.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "--delta must be positive");
  const auto problem = read_problem(cfg.problem);
  const auto cps = critical_points(problem.spec);
  std::vector<CoincidenceReport> reports;
  std::ostringstream comp;
  for (int level = 0; level < cfg.levels; ++level) {
    const auto s = load_level(cfg, problem.spec, level);
    reports.push_back(extract_coincidence(s.solution, s.mesh, s.partition));
    const auto c = complementarity_product(s.solution, s.mesh, s.partition, cps, cfg.delta);
    write_complementarity_csv(comp, level, c, level == 0);
    std::cout << "level " << level << ": " << reports.back().intervals.size() << " intervals, "
              << reports.back().isolated.size() << " isolated points, complementarity "
              << format_double(c.max_product) << '\n';
  }
  std::optional<StabilityVerdict> verdict;
  if (reports.size() >= 3) {
    verdict = component_stability(reports);
    std::cout << (verdict->stable ? "stable" : "unstable") << ", " << verdict->components
              << " components" << (verdict->reason.empty() ? "" : ": " + verdict->reason) << '\n';
  }
  write_file((fs::path(cfg.out) / "coincidence.json").string(), coincidence_json(reports, verdict));
  write_file((fs::path(cfg.out) / "complementarity.csv").string(), comp.str());
  return kOk;
}

int cmd_fit(const RunConfig& cfg) {
  validate(cfg);
  const auto problem = read_problem(cfg.problem);
  const auto s = load_level(cfg, problem.spec, cfg.levels - 1);
  const auto report = extract_coincidence(s.solution, s.mesh, s.partition);
  std::vector<std::pair<std::string, CriticalPoint>> candidates;
  std::vector<CriticalPoint> all = critical_points(problem.spec);
  for (std::size_t i = 0; i < all.size(); ++i) candidates.emplace_back("cp" + std::to_string(i), all[i]);
  for (std::size_t k = 0; k < report.endpoints.size(); ++k) {
    CriticalPoint cp;
    cp.location = report.endpoints[k].location;
    cp.angle = std::numbers::pi;
    cp.before = cp.after = ConditionTag::Signorini;
    cp.kind = CriticalKind::CoincidenceEndpoint;
    candidates.emplace_back("endpoint" + std::to_string(k), cp);
    all.push_back(cp);
  }
  std::vector<FitOutcome> fits;
  for (const auto& [label, cp] : candidates) {
    if (!cfg.point.empty() && cfg.point != label) continue;
    FitOutcome f{label, cp, {}, {}, {}};
    try {
      f.report = fit_exponent(s.solution.y, s.mesh, cp, all, {});
    } catch (const Error& e) {
      f.error = e.code();
      f.message = e.what();
    }
    fits.push_back(std::move(f));
  }
  if (fits.empty()) throw Error(ErrorCode::InvalidArgument, "no critical point labelled '" + cfg.point + "'");
  write_file((fs::path(cfg.out) / "exponents.json").string(), exponents_json(fits));
  std::ostringstream arcs;
  write_arcs_csv(arcs, fits);
  write_file((fs::path(cfg.out) / "arcs.csv").string(), arcs.str());
  int code = kOk;
  for (const auto& f : fits) {
    if (f.report) {
      std::cout << f.label << ": fitted " << format_double(f.report->fitted) << ", predicted "
                << format_double(f.report->predicted) << ", R^2 " << format_double(f.report->r_squared)
                << '\n';
    } else {
      std::cout << f.label << ": " << to_string(*f.error) << '\n';
      code = report_error(*f.error, f.label + ": " + f.message);
    }
  }
  return code;
}

int cmd_verify_map(const RunConfig& cfg) {
  if (cfg.resolution < 1) throw Error(ErrorCode::InvalidArgument, "--resolution must be positive");
  const auto map = make_corner_map({0, 0}, cfg.alpha, 0.0);
  const auto re_z2 = AnalyticField::polynomial({{1, 2, 0}, {-1, 0, 2}});
  const double k = std::numbers::pi / cfg.alpha;
  const auto power = AnalyticField::corner({{0, 0}, k, 1.0, 0.0, 0.5 * cfg.alpha + std::numbers::pi});
  const std::vector<std::pair<std::string, EnergyIdentity>> results{
      {"re_z2", energy_identity_check(re_z2, map, cfg.resolution)},
      {"straightened_power", energy_identity_check(power, map, cfg.resolution)}};
  fs::create_directories(cfg.out);
  const auto text = energy_identity_json(cfg.alpha, cfg.resolution, results);
  write_file((fs::path(cfg.out) / "verify_map.json").string(), text);
  std::cout << text;
  return kOk;
}

int cmd_convergence(const RunConfig& cfg) {
  validate(cfg);
  const auto problem = read_problem(cfg.problem);
  if (!problem.exact) {
    throw Error(ErrorCode::NoExactSolution, "problem '" + problem.name + "' has no exact solution");
  }
  const auto grading = parse_grading(cfg.grade, problem.spec);
  std::vector<Vec2> singular;
  for (const auto& cp : critical_points(problem.spec)) singular.push_back(cp.location);
  for (const auto& term : problem.exact->terms()) {
    if (const auto* c = std::get_if<CornerPower>(&term)) singular.push_back(c->center);
  }
  SolverOptions opts;
  opts.cg_tol = cfg.tol;
  std::vector<ConvergenceRow> rows;
  double h = cfg.h;
  for (auto& mesh : build_levels(problem.spec, cfg.h, cfg.levels, grading)) {
    const auto r = solve_level(problem.spec, std::move(mesh), opts);
    const auto e = discretization_errors(r.solution.y, r.mesh, *problem.exact, singular);
    rows.push_back({r.mesh.level, h, r.mesh.num_nodes(), e.l2, e.h1_seminorm});
    h *= 0.5;
  }
  const auto rates = fitted_rates(rows);
  fs::create_directories(cfg.out);
  std::ostringstream csv;
  write_convergence_csv(csv, rows);
  write_file((fs::path(cfg.out) / "convergence.csv").string(), csv.str());
  write_file((fs::path(cfg.out) / "convergence.json").string(), convergence_json(rows, rates));
  std::cout << csv.str() << "fitted rates: L2 " << format_double(rates.l2) << ", H1 "
            << format_double(rates.h1) << '\n';
  return kOk;
}

int cmd_case_list() {
  for (const auto& name : case_names()) std::cout << name << "  " << make_case(name).description << '\n';
  return kOk;
}

int cmd_case_emit(const std::string& name, const std::string& out) {
  const auto c = make_case(name);
  if (c.exact) {
    const auto probe = probe_strong_form(c);
    if (!probe.passed) {
      return report_error(ErrorCode::IncompatibleYStar,
                    "exact solution of '" + name + "' fails the strong-form probe check");
    }
  }
  const auto text = write_problem(problem_from_case(c));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signorini finite element lab"};
  app.set_help_flag("--help", "print help");  // -h is taken by the mesh-size flag
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_run_options = [&](CLI::App* sub, bool mesh_options) {
    sub->add_option("--problem", cfg.problem, "problem file (JSON)")->required();
    sub->add_option("--levels", cfg.levels, "number of refinement levels");
    sub->add_option("--out", cfg.out, "output directory");
    if (mesh_options) {
      sub->add_option("--h", cfg.h, "base mesh size");
      sub->add_option("--grade", cfg.grade, "grading cp=mu,R toward critical point cp");
      sub->add_option("--tol", cfg.tol, "relative CG tolerance");
    }
  };
  auto* solve = app.add_subcommand("solve", "solve on every level; write meshes, solutions, traces");
  add_run_options(solve, true);
  auto* analyze = app.add_subcommand("analyze", "coincidence structure and complementarity");
  add_run_options(analyze, false);
  analyze->add_option("--delta", cfg.delta, "exclusion radius around critical points");
  auto* fit = app.add_subcommand("fit", "fit singular exponents on the finest level");
  add_run_options(fit, false);
  fit->add_option("--point", cfg.point, "label of a single point (cpN or endpointN)");
  auto* verify = app.add_subcommand("verify-map", "energy identity of the corner map");
  verify->add_option("--alpha", cfg.alpha, "sector opening (radians)");
  verify->add_option("--resolution", cfg.resolution, "Gauss points per direction");
  verify->add_option("--out", cfg.out, "output directory");
  auto* conv = app.add_subcommand("convergence", "error norms and rates against the exact solution");
  add_run_options(conv, true);
  auto* cases = app.add_subcommand("case", "benchmark problems");
  cases->require_subcommand(1);
  cases->add_subcommand("list", "list benchmark cases");
  auto* emit = cases->add_subcommand("emit", "write a case as a problem file");
  std::string case_name, case_out;
  emit->add_option("name", case_name, "case name")->required();
  emit->add_option("--out", case_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(ErrorCode::InvalidArgument, e.what());
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*analyze) return cmd_analyze(cfg);
    if (*fit) return cmd_fit(cfg);
    if (*verify) return cmd_verify_map(cfg);
    if (*conv) return cmd_convergence(cfg);
    if (*emit) return cmd_case_emit(case_name, case_out);
    return cmd_case_list();
  } catch (const Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error(ErrorCode::InvalidArgument, e.what());
  }
}
