// Command line driver for the budget-constrained path planners.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "budgetpath/discrete_budget.hpp"
#include "budgetpath/field_io.hpp"
#include "budgetpath/reachability.hpp"
#include "budgetpath/scenarios.hpp"
#include "budgetpath/ssp.hpp"

using namespace budgetpath;

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  int ntheta = 0;
  double tol = 0.0;
  int max_iters = 0;
  double budget = 0.0;
  int grid_size = 0;
  std::vector<std::string> emit;
};

void add_common(CLI::App* app, Common& c, bool grid_options) {
  app->add_option("--config", c.config, grid_options ? "Built-in scenario name or JSON config" : "Input file")
      ->required();
  app->add_option("--out-dir", c.out_dir, "Directory for output files (stdout when omitted)");
  app->add_option("--tol", c.tol, "Convergence tolerance");
  app->add_option("--max-iters", c.max_iters, "Iteration cap");
  if (!grid_options) {
    app->add_option("--budget", c.budget, "Override the budget B from the file");
    return;
  }
  app->add_option("--budget", c.budget, "Override the budget B");
  app->add_option("--grid-size", c.grid_size, "Override the grid side N");
  app->add_option("--ntheta", c.ntheta, "Sampled control directions");
}

ScenarioConfig load_config(const Common& c) {
  ScenarioConfig s = resolve_scenario(c.config);
  if (c.grid_size > 0) s.grid_size = c.grid_size;
  if (c.budget > 0) {
    s.budget = c.budget;
    s.budget_step.reset();
  }
  if (c.ntheta > 0) s.controls = c.ntheta;
  if (c.tol > 0) s.tolerance = c.tol;
  if (c.max_iters > 0) s.max_iterations = c.max_iters;
  return s;
}

EmitSet parse_emit(const std::vector<std::string>& names) {
  if (names.empty()) return {};
  EmitSet e{false, false, false, false, false, false};
  for (const std::string& n : names) {
    if (n == "w2") e.w2 = true;
    else if (n == "w1-top") e.w1_top = true;
    else if (n == "w1-full") e.w1_full = true;
    else if (n == "contours") e.contours = true;
    else if (n == "log") e.log = true;
    else if (n == "paths") e.paths = true;
    else throw CLI::ValidationError("--emit", "unknown artifact " + n);
  }
  return e;
}

// Output stream on `dir/name`, or stdout when no directory is set.
class Sink {
 public:
  Sink(const std::string& dir, const std::string& name) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    path_ = (std::filesystem::path(dir) / name).string();
    file_.open(path_);
    if (!file_) throw std::runtime_error("cannot write " + path_);
  }
  std::ostream& out() { return path_.empty() ? std::cout : file_; }
  ~Sink() {
    if (!path_.empty()) std::cerr << "wrote " << path_ << '\n';
  }

 private:
  std::string path_;
  std::ofstream file_;
};

void print_summary(const ScenarioBundle& b) {
  const BudgetResetSolution& s = b.solution;
  std::cerr << b.config.name << ": N = " << b.config.grid_size << ", B = " << b.config.budget << ", "
            << s.log.size() << " iterations, " << (s.converged ? "converged" : "not converged") << '\n';
  for (std::size_t k = 0; k < b.paths.size(); ++k) {
    const PathTrace& p = b.paths[k];
    const ReplayReport& r = b.replays[k];
    std::cerr << "  start " << k << ": ";
    if (!p.reached) {
      std::cerr << "target not reached\n";
      continue;
    }
    std::cerr << "cost " << p.cost << " (value " << p.start_value << "), length " << r.length << ", resets "
              << r.resets << ", " << (r.feasible ? "feasible" : "INFEASIBLE") << '\n';
  }
  if (b.errors) {
    std::cerr << "  L1 " << b.errors->l1 << ", Linf(3h) " << b.errors->linf_3h << ", Linf(0.1) "
              << b.errors->linf_01 << '\n';
  }
}

int run_discrete(const Common& c, const std::string& mode) {
  GraphFile gf = read_graph_file(c.config);
  const BudgetLevels levels{c.budget > 0 ? static_cast<int>(c.budget) : gf.max_budget};
  ExpandedValueTable table;
  if (mode == "noreset") {
    table = solve_no_reset(gf.graph, levels).table;
  } else if (mode == "reset-dijkstra") {
    table = solve_reset_dijkstra(gf.graph, levels);
  } else {
    const IterativeResetSolution s = solve_reset_iterative(gf.graph, levels);
    std::cerr << "iterations: " << s.iterations << '\n';
    table = s.table;
  }
  Sink sink(c.out_dir, "values.txt");
  write_value_table(sink.out(), table);
  return 0;
}

int run_ssp(const Common& c, const std::string& mode) {
  SSPFile sf = read_ssp_file(c.config);
  const BudgetLevels levels{c.budget > 0 ? static_cast<int>(c.budget) : sf.max_budget};
  const double tol = c.tol > 0 ? c.tol : 1e-12;
  const long cap = c.max_iters > 0 ? c.max_iters : 1'000'000;
  ExpandedValueTable table;
  if (mode == "budget") {
    const BudgetSSPResult r = solve_budget_ssp(sf.model, levels, tol, cap);
    std::cerr << "iterations: " << r.iterations << (r.converged ? "" : " (not converged)") << '\n';
    table = r.table;
  } else if (mode == "reset") {
    const ResetSSPResult r = solve_reset_ssp(sf.model, levels, tol, static_cast<int>(std::min(cap, 100'000L)));
    std::cerr << "outer iterations: " << r.iterations << (r.converged ? "" : " (not converged)") << '\n';
    table = r.table;
  } else {
    table = solve_expanded_ssp(sf.model, levels, mode == "expanded-reset" ? ResetMode::kReset : ResetMode::kGeneral,
                               tol, cap);
  }
  Sink sink(c.out_dir, "values.txt");
  write_value_table(sink.out(), table);
  return 0;
}

int run_hjb_solve(const Common& c, const std::vector<double>& levels) {
  RunOptions o;
  o.out_dir = c.out_dir;
  o.emit = parse_emit(c.emit);
  o.contour_levels = levels;
  const ScenarioConfig config = load_config(c);
  o.oracle = config.name == "convergence";
  const ScenarioBundle b = run_scenario(config, o);
  print_summary(b);
  for (const std::string& f : b.files) std::cerr << "wrote " << f << '\n';
  return b.solution.converged ? 0 : 2;
}

int run_hjb_converge(const Common& c, const std::vector<int>& sizes, bool plain) {
  SolveOptions o;
  o.budget_monotone = !plain;
  if (c.ntheta > 0) o.controls.directions = c.ntheta;
  if (c.tol > 0) o.tolerance = c.tol;
  if (c.max_iters > 0) o.max_iterations = c.max_iters;
  const std::vector<ErrorReport> reps = run_convergence_test(sizes, o);
  Sink sink(c.out_dir, "errors.csv");
  std::ostream& out = sink.out();
  out << "n,l1,linf_3h,linf_01,mismatched,compared,iterations,seconds\n";
  for (const ErrorReport& e : reps) {
    out << e.n << ',' << e.l1 << ',' << e.linf_3h << ',' << e.linf_01 << ',' << e.mismatched << ','
        << e.compared << ',' << e.iterations << ',' << e.seconds << '\n';
  }
  return 0;
}

int run_reach(const Common& c) {
  const ScenarioConfig config = load_config(c);
  const RasterizedScenario r = rasterize_scenario(config);
  const ReachabilitySolution s = solve_reachability(r.grid, config.budget, config.max_iterations);
  std::cerr << config.name << ": " << s.iterations() << " iterations, " << s.components << " safe components, "
            << (s.converged ? "converged" : "not converged") << '\n';
  if (c.out_dir.empty()) {
    write_reachability_log(std::cout, s.log);
    return s.converged ? 0 : 2;
  }
  const std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  write_field_file((dir / "v.txt").string(), s.v, r.grid.h);
  write_field_file((dir / "g.txt").string(), s.g, r.grid.h);
  std::ofstream mask(dir / "reachable.csv");
  for (int j = 0; j < r.grid.n; ++j) {
    for (int i = 0; i < r.grid.n; ++i) {
      const bool reach = r.grid.unsafe(i, j) ? s.v(i, j) <= config.budget : is_finite(s.g(i, j));
      mask << (i ? "," : "") << (reach && !r.grid.obstacle(i, j) ? 1 : 0);
    }
    mask << '\n';
  }
  std::ofstream log(dir / "reach_log.csv");
  write_reachability_log(log, s.log);
  return s.converged ? 0 : 2;
}

int run_path(const Common& c, const std::vector<double>& start, double b0) {
  const ScenarioConfig config = load_config(c);
  const RasterizedScenario r = rasterize_scenario(config);
  SolveOptions o;
  o.controls.directions = config.controls;
  o.tolerance = config.tolerance;
  o.max_iterations = config.max_iterations;
  const BudgetResetSolution s = solve_budget_reset(r.grid, r.axis, o);
  const double b = b0 >= 0 ? b0 : config.budget;
  const PathTrace p = extract_path(s, r.grid, Vec2(start[0], start[1]), b, o.controls);
  const ReplayReport rep = replay_path(config, p.points, replay_slack(r.grid));
  std::cerr << "value " << p.start_value << ", cost " << p.cost << ", " << (p.reached ? "reached" : "not reached")
            << ", " << (rep.feasible ? "feasible" : "INFEASIBLE") << " (max spent " << rep.max_spent << ", "
            << rep.resets << " resets)\n";
  Sink sink(c.out_dir, "path.csv");
  write_path_csv(sink.out(), p);
  return p.reached && rep.feasible ? 0 : 2;
}

int run_named_scenario(const Common& c, bool list, const std::string& save) {
  if (list) {
    for (const std::string& n : builtin_scenario_names()) std::cout << n << '\n';
    return 0;
  }
  if (c.config.empty()) throw CLI::ValidationError("--config", "required unless --list is given");
  const ScenarioConfig config = load_config(c);
  if (!save.empty()) {
    save_scenario(save, config);
    std::cerr << "wrote " << save << '\n';
    return 0;
  }
  RunOptions o;
  o.out_dir = c.out_dir;
  o.emit = parse_emit(c.emit);
  o.oracle = config.name == "convergence";
  const ScenarioBundle b = run_scenario(config, o);
  print_summary(b);
  for (const std::string& f : b.files) std::cerr << "wrote " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shortest paths under a resettable budget constraint"};
  app.require_subcommand(1);
  std::cout << std::setprecision(12);

  Common c;
  std::string mode = "reset-dijkstra";
  auto* discrete = app.add_subcommand("discrete", "Budget-constrained shortest paths on a graph");
  add_common(discrete, c, false);
  discrete->add_option("--mode", mode, "noreset, reset-dijkstra or reset-iterative")
      ->check(CLI::IsMember({"noreset", "reset-dijkstra", "reset-iterative"}));

  std::string ssp_mode = "reset";
  auto* ssp = app.add_subcommand("ssp", "Budget-constrained stochastic shortest paths");
  add_common(ssp, c, false);
  ssp->add_option("--mode", ssp_mode, "budget, reset, expanded or expanded-reset")
      ->check(CLI::IsMember({"budget", "reset", "expanded", "expanded-reset"}));

  auto* hjb = app.add_subcommand("hjb", "Continuous problem on a grid");
  hjb->require_subcommand(1);
  std::vector<double> levels;
  auto* solve = hjb->add_subcommand("solve", "Solve one scenario and write fields");
  add_common(solve, c, true);
  solve->add_option("--emit", c.emit, "Artifacts: w2, w1-top, w1-full, contours, log, paths");
  solve->add_option("--levels", levels, "Contour levels (default: twelve over the value range)");

  std::vector<int> sizes = {61, 121, 241};
  bool plain = false;
  auto* converge = hjb->add_subcommand("converge", "Error table against the exact solution");
  converge->add_option("--sizes", sizes, "Grid sides");
  converge->add_option("--out-dir", c.out_dir, "Directory for errors.csv");
  converge->add_option("--ntheta", c.ntheta, "Sampled control directions");
  converge->add_option("--tol", c.tol, "Convergence tolerance");
  converge->add_option("--max-iters", c.max_iters, "Iteration cap");
  converge->add_flag("--plain", plain, "Do not cap each budget slice by the one below");

  auto* reach = app.add_subcommand("reach", "Reachable sets without budget slices");
  add_common(reach, c, true);

  std::vector<double> start;
  double b0 = -1.0;
  auto* path = app.add_subcommand("path", "Extract an optimal path");
  add_common(path, c, true);
  path->add_option("--start", start, "Start point x y")->expected(2)->required();
  path->add_option("--b0", b0, "Starting budget (default B)");

  bool list = false;
  std::string save;
  auto* scenario = app.add_subcommand("scenario", "Run a scenario with every artifact");
  scenario->add_option("--config", c.config, "Built-in scenario name or JSON config");
  scenario->add_option("--out-dir", c.out_dir, "Directory for output files");
  scenario->add_option("--budget", c.budget, "Override the budget B");
  scenario->add_option("--grid-size", c.grid_size, "Override the grid side N");
  scenario->add_option("--ntheta", c.ntheta, "Sampled control directions");
  scenario->add_option("--tol", c.tol, "Convergence tolerance");
  scenario->add_option("--max-iters", c.max_iters, "Iteration cap");
  scenario->add_option("--emit", c.emit, "Artifacts: w2, w1-top, w1-full, contours, log, paths");
  scenario->add_flag("--list", list, "List the built-in scenarios");
  scenario->add_option("--save", save, "Write the resolved config as JSON and exit");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*discrete) return run_discrete(c, mode);
    if (*ssp) return run_ssp(c, ssp_mode);
    if (*solve) return run_hjb_solve(c, levels);
    if (*converge) return run_hjb_converge(c, sizes, plain);
    if (*reach) return run_reach(c);
    if (*path) return run_path(c, start, b0);
    if (*scenario) return run_named_scenario(c, list, save);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
