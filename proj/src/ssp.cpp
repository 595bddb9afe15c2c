#include "budgetpath/ssp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace budgetpath {

SSPModel::SSPModel(int size, int target, double min_cost)
    : target_(target), min_cost_(min_cost), controls_(size), safe_(size, false) {
  if (size < 1 || target < 0 || target >= size) {
    throw std::invalid_argument("target id outside node range");
  }
  if (!(min_cost > 0.0)) throw std::invalid_argument("cost lower bound must be positive");
}

void SSPModel::add_control(int node, Control control) {
  if (node < 0 || node >= size()) throw std::invalid_argument("node outside range");
  if (node == target_) throw std::invalid_argument("target must be absorbing");
  if (control.cost < min_cost_) throw std::invalid_argument("control cost below the lower bound");
  double total = 0.0;
  std::vector<Transition> kept;
  for (const Transition& t : control.transitions) {
    if (t.to < 0 || t.to >= size()) throw std::invalid_argument("successor outside range");
    if (t.probability < 0.0) throw std::invalid_argument("negative probability");
    total += t.probability;
    if (t.probability > 0.0) kept.push_back(t);
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
  control.transitions = std::move(kept);
  controls_[node].push_back(std::move(control));
}

void SSPModel::set_safe(int node, bool safe) {
  if (node == target_) throw std::invalid_argument("the target carries no safety label");
  safe_[node] = safe;
}

SSPModel ssp_from_graph(const DirectedGraph& graph) {
  double lower = kInf;
  for (int i = 0; i < graph.size(); ++i) {
    for (const Arc& a : graph.arcs(i)) lower = std::min(lower, a.cost);
  }
  SSPModel model(graph.size(), graph.target(), is_finite(lower) ? lower : 1.0);
  for (int i = 0; i < graph.size(); ++i) {
    if (i != graph.target()) model.set_safe(i, graph.is_safe(i));
    for (const Arc& a : graph.arcs(i)) model.add_control(i, {a.cost, a.resource, {{a.to, 1.0}}});
  }
  return model;
}

namespace {

// An SSP over internal states whose controls may also lead to states with
// known values. Those are folded into `fixed_value` (sum of p * value) and
// `fixed_mass` (their total probability).
struct CoreControl {
  double cost;
  double fixed_value;
  double fixed_mass;
  std::vector<std::pair<int, double>> internal;
};
using CoreProblem = std::vector<std::vector<CoreControl>>;

struct CoreResult {
  Eigen::VectorXd values;
  std::vector<int> policy;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Adds p * value to a control, skipping nothing: callers only pass p > 0.
void add_fixed(CoreControl& c, double p, double value) {
  c.fixed_mass += p;
  c.fixed_value += p * value;
}

// States from which some policy reaches a fixed successor with probability 1.
std::vector<char> almost_sure_states(const CoreProblem& problem) {
  const int n = static_cast<int>(problem.size());
  std::vector<char> inside(n, 1);
  std::vector<std::vector<int>> rev(n);
  while (true) {
    auto valid = [&](const CoreControl& c) {
      if (!is_finite(c.fixed_value)) return false;
      for (const auto& [j, p] : c.internal) {
        if (!inside[j]) return false;
      }
      return true;
    };
    for (auto& r : rev) r.clear();
    std::vector<char> reach(n, 0);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
      if (!inside[s]) continue;
      for (const CoreControl& c : problem[s]) {
        if (!valid(c)) continue;
        if (c.fixed_mass > 0.0 && !reach[s]) {
          reach[s] = 1;
          queue.push_back(s);
        }
        for (const auto& [j, p] : c.internal) rev[j].push_back(s);
      }
    }
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      for (int s : rev[j]) {
        if (!reach[s]) {
          reach[s] = 1;
          queue.push_back(s);
        }
      }
    }
    if (reach == inside) return inside;
    inside = std::move(reach);
  }
}

CoreResult solve_core(const CoreProblem& problem, double tolerance, long max_iterations) {
  const int n = static_cast<int>(problem.size());
  const std::vector<char> proper = almost_sure_states(problem);
  auto usable = [&](const CoreControl& c) {
    if (!is_finite(c.fixed_value)) return false;
    for (const auto& [j, p] : c.internal) {
      if (!proper[j]) return false;
    }
    return true;
  };

  CoreResult out;
  out.values = Eigen::VectorXd::Constant(n, kInf);
  for (int s = 0; s < n; ++s) {
    if (proper[s]) out.values[s] = 0.0;
  }
  out.policy.assign(n, -1);
  Eigen::VectorXd next = out.values;
  auto apply = [&](const Eigen::VectorXd& u, int s, int* argmin) {
    double best = kInf;
    for (std::size_t a = 0; a < problem[s].size(); ++a) {
      const CoreControl& c = problem[s][a];
      if (!usable(c)) continue;
      double q = c.cost + c.fixed_value;
      for (const auto& [j, p] : c.internal) q += p * u[j];
      if (q < best) {
        best = q;
        if (argmin) *argmin = static_cast<int>(a);
      }
    }
    return best;
  };

  for (long it = 1; it <= max_iterations; ++it) {
    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
      if (!proper[s]) continue;
      next[s] = apply(out.values, s, nullptr);
      residual = std::max(residual, std::abs(next[s] - out.values[s]));
    }
    out.values.swap(next);
    out.iterations = it;
    out.residual = residual;
    out.residual_history.push_back(residual);
    if (residual <= tolerance) {
      out.converged = true;
      break;
    }
  }
  for (int s = 0; s < n; ++s) {
    if (proper[s]) apply(out.values, s, &out.policy[s]);
  }
  return out;
}

}  // namespace

ValueIterationResult value_iteration(const SSPModel& model, double tolerance,
                                     long max_iterations) {
  const int n = model.size();
  const int t = model.target();
  CoreProblem problem(n);
  for (int i = 0; i < n; ++i) {
    if (i == t) continue;
    for (const Control& a : model.controls(i)) {
      CoreControl c{a.cost, 0.0, 0.0, {}};
      for (const Transition& tr : a.transitions) {
        if (tr.to == t) {
          add_fixed(c, tr.probability, 0.0);
        } else {
          c.internal.emplace_back(tr.to, tr.probability);
        }
      }
      problem[i].push_back(std::move(c));
    }
  }
  CoreResult core = solve_core(problem, tolerance, max_iterations);
  core.values[t] = 0.0;
  return {core.values, core.policy, core.iterations, core.residual, core.converged,
          std::move(core.residual_history)};
}

BudgetSSPResult solve_budget_ssp(const SSPModel& model, BudgetLevels levels, double tolerance,
                                 long max_iterations) {
  const int n = model.size();
  const int t = model.target();
  const int B = levels.max_budget;
  if (B < 0) throw std::invalid_argument("budget must be nonnegative");
  int min_resource = std::numeric_limits<int>::max();
  for (int i = 0; i < n; ++i) {
    for (const Control& a : model.controls(i)) min_resource = std::min(min_resource, a.resource);
  }

  BudgetSSPResult out;
  if (min_resource < 0) {
    out.method = BudgetSSPMethod::kFullExpanded;
    out.table = solve_expanded_ssp(model, levels, ResetMode::kGeneral, tolerance, max_iterations);
    return out;
  }

  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(n, B + 1, kInf);
  W.row(t).setZero();
  if (min_resource > 0) {
    out.method = BudgetSSPMethod::kExplicitSweep;
    for (int b = 0; b <= B; ++b) {
      for (int i = 0; i < n; ++i) {
        if (i == t) continue;
        double best = kInf;
        for (const Control& a : model.controls(i)) {
          if (a.resource > b) continue;
          double q = a.cost;
          for (const Transition& tr : a.transitions) q += tr.probability * W(tr.to, b - a.resource);
          best = std::min(best, q);
        }
        W(i, b) = best;
      }
    }
    out.table = {W};
    return out;
  }

  // Zero-cost controls stay inside the slice; the rest read lower slices.
  out.method = BudgetSSPMethod::kPerSlice;
  std::vector<int> internal_id(n, -1), node_of;
  for (int i = 0; i < n; ++i) {
    if (i == t) continue;
    internal_id[i] = static_cast<int>(node_of.size());
    node_of.push_back(i);
  }
  for (int b = 0; b <= B; ++b) {
    CoreProblem problem(node_of.size());
    for (std::size_t s = 0; s < node_of.size(); ++s) {
      for (const Control& a : model.controls(node_of[s])) {
        if (a.resource > b) continue;
        CoreControl c{a.cost, 0.0, 0.0, {}};
        for (const Transition& tr : a.transitions) {
          if (a.resource == 0 && tr.to != t) {
            c.internal.emplace_back(internal_id[tr.to], tr.probability);
          } else {
            add_fixed(c, tr.probability, W(tr.to, b - a.resource));
          }
        }
        problem[s].push_back(std::move(c));
      }
    }
    const CoreResult core = solve_core(problem, tolerance, max_iterations);
    out.iterations += core.iterations;
    out.converged = out.converged && core.converged;
    for (std::size_t s = 0; s < node_of.size(); ++s) W(node_of[s], b) = core.values[s];
  }
  out.table = {W};
  return out;
}

namespace {

void check_reset_labels(const SSPModel& model, int B) {
  for (int i = 0; i < model.size(); ++i) {
    if (i == model.target()) continue;
    for (const Control& a : model.controls(i)) {
      if (model.is_safe(i) ? a.resource != -B : a.resource < 1) {
        throw std::invalid_argument("control costs violate the reset convention at node " +
                                    std::to_string(i + 1));
      }
    }
  }
}

// Expanded state ids: safe nodes once (reset mode), otherwise every level.
struct ExpandedIndex {
  std::vector<int> id;  // node * (B+1) + level
  std::vector<ExpandedState> states;
  int B;
  int operator()(int node, int level) const { return id[node * (B + 1) + level]; }
};

ExpandedIndex index_states(const SSPModel& model, int B, ResetMode mode) {
  ExpandedIndex ix{std::vector<int>(static_cast<std::size_t>(model.size()) * (B + 1), -1), {}, B};
  for (int i = 0; i < model.size(); ++i) {
    if (i == model.target()) continue;
    if (mode == ResetMode::kReset && model.is_safe(i)) {
      const int id = static_cast<int>(ix.states.size());
      ix.states.push_back({i, B});
      for (int b = 0; b <= B; ++b) ix.id[i * (B + 1) + b] = id;
      continue;
    }
    const int first = mode == ResetMode::kReset ? 1 : 0;
    for (int b = first; b <= B; ++b) {
      ix.id[i * (B + 1) + b] = static_cast<int>(ix.states.size());
      ix.states.push_back({i, b});
    }
  }
  return ix;
}

CoreProblem expanded_problem(const SSPModel& model, const ExpandedIndex& ix) {
  const int B = ix.B;
  CoreProblem problem(ix.states.size());
  for (std::size_t s = 0; s < ix.states.size(); ++s) {
    const auto [i, b] = ix.states[s];
    for (const Control& a : model.controls(i)) {
      if (a.resource > b) continue;
      const int level = ominus(b, a.resource, B);
      CoreControl c{a.cost, 0.0, 0.0, {}};
      for (const Transition& tr : a.transitions) {
        if (tr.to == model.target()) {
          add_fixed(c, tr.probability, 0.0);
        } else if (const int j = ix(tr.to, level); j < 0) {
          add_fixed(c, tr.probability, kInf);
        } else {
          c.internal.emplace_back(j, tr.probability);
        }
      }
      problem[s].push_back(std::move(c));
    }
  }
  return problem;
}

}  // namespace

ExpandedValueTable solve_expanded_ssp(const SSPModel& model, BudgetLevels levels, ResetMode mode,
                                      double tolerance, long max_iterations) {
  const int B = levels.max_budget;
  if (mode == ResetMode::kReset) check_reset_labels(model, B);
  const ExpandedIndex ix = index_states(model, B, mode);
  const CoreResult core = solve_core(expanded_problem(model, ix), tolerance, max_iterations);
  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(model.size(), B + 1, kInf);
  W.row(model.target()).setZero();
  for (int i = 0; i < model.size(); ++i) {
    if (i == model.target()) continue;
    for (int b = 0; b <= B; ++b) {
      if (const int s = ix(i, b); s >= 0) W(i, b) = core.values[s];
    }
  }
  return {W};
}

ResetSSPResult solve_reset_ssp(const SSPModel& model, BudgetLevels levels, double tolerance,
                               int max_outer_iterations) {
  const int n = model.size();
  const int t = model.target();
  const int B = levels.max_budget;
  check_reset_labels(model, B);
  auto safe = [&](int i) { return i != t && model.is_safe(i); };

  // Safe values start at 0 on states that can finish with probability one and
  // rise monotonically; starting from +inf stalls on cycles through S and U.
  const ExpandedIndex ix = index_states(model, B, ResetMode::kReset);
  const std::vector<char> proper = almost_sure_states(expanded_problem(model, ix));

  std::vector<int> safe_nodes, internal_id(n, -1);
  std::vector<char> read_by_unsafe(n, 0);
  for (int i = 0; i < n; ++i) {
    if (safe(i)) {
      internal_id[i] = static_cast<int>(safe_nodes.size());
      safe_nodes.push_back(i);
    } else if (i != t) {
      for (const Control& a : model.controls(i)) {
        for (const Transition& tr : a.transitions) {
          if (safe(tr.to)) read_by_unsafe[tr.to] = 1;
        }
      }
    }
  }

  Eigen::VectorXd safe_values = Eigen::VectorXd::Constant(n, kInf);
  for (int j : safe_nodes) {
    if (proper[ix(j, B)]) safe_values[j] = 0.0;
  }
  ResetSSPResult out;
  Eigen::MatrixXd W = Eigen::MatrixXd::Constant(n, B + 1, kInf);
  while (out.iterations < max_outer_iterations) {
    ++out.iterations;
    W.setConstant(kInf);
    W.row(t).setZero();
    for (int j : safe_nodes) W.row(j).setConstant(safe_values[j]);
    for (int b = 1; b <= B; ++b) {
      for (int i = 0; i < n; ++i) {
        if (i == t || safe(i)) continue;
        double best = kInf;
        for (const Control& a : model.controls(i)) {
          if (a.resource > b) continue;
          double q = a.cost;
          for (const Transition& tr : a.transitions) q += tr.probability * W(tr.to, b - a.resource);
          best = std::min(best, q);
        }
        W(i, b) = best;
      }
    }

    CoreProblem problem(safe_nodes.size());
    for (std::size_t s = 0; s < safe_nodes.size(); ++s) {
      for (const Control& a : model.controls(safe_nodes[s])) {
        CoreControl c{a.cost, 0.0, 0.0, {}};
        for (const Transition& tr : a.transitions) {
          if (safe(tr.to)) {
            c.internal.emplace_back(internal_id[tr.to], tr.probability);
          } else {
            add_fixed(c, tr.probability, W(tr.to, ominus(B, a.resource, B)));
          }
        }
        problem[s].push_back(std::move(c));
      }
    }
    const CoreResult core = solve_core(problem, tolerance, 1'000'000);

    double change = 0.0;
    for (std::size_t s = 0; s < safe_nodes.size(); ++s) {
      const int j = safe_nodes[s];
      const double before = safe_values[j], after = core.values[s];
      if (read_by_unsafe[j] && before != after) {
        change = std::max(change, is_finite(before) && is_finite(after) ? std::abs(after - before)
                                                                         : kInf);
      }
      safe_values[j] = after;
      W.row(j).setConstant(after);
    }
    if (change <= tolerance) {
      out.converged = true;
      break;
    }
  }
  out.table = {W};
  return out;
}

PolicyEstimate simulate_policy(const SSPModel& model, const std::vector<int>& policy, int start,
                               long episodes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (long e = 0; e < episodes; ++e) {
    int node = start;
    double cost = 0.0;
    for (long step = 0; node != model.target(); ++step) {
      if (step > 10'000'000 || policy[node] < 0) throw std::runtime_error("policy does not terminate");
      const Control& a = model.controls(node)[policy[node]];
      cost += a.cost;
      double r = unit(rng);
      int next = a.transitions.back().to;
      for (const Transition& tr : a.transitions) {
        if (r < tr.probability) {
          next = tr.to;
          break;
        }
        r -= tr.probability;
      }
      node = next;
    }
    sum += cost;
    sum_sq += cost * cost;
  }
  const double mean = sum / episodes;
  const double var = std::max(0.0, sum_sq / episodes - mean * mean);
  return {mean, std::sqrt(var / episodes)};
}

namespace {

bool next_line(std::istream& in, std::istringstream& line) {
  std::string text;
  while (std::getline(in, text)) {
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(text);
    return true;
  }
  return false;
}

}  // namespace

SSPFile read_ssp(std::istream& in) {
  std::istringstream line;
  if (!next_line(in, line)) throw std::runtime_error("model file: missing header");
  int m = 0, target = 0, budget = 0;
  double delta = 0.0;
  if (!(line >> m >> target >> delta >> budget) || target < 1 || target > m + 1) {
    throw std::runtime_error("model file: malformed header");
  }
  SSPFile out{SSPModel(m + 1, target - 1, delta), budget};
  while (next_line(in, line)) {
    std::string first;
    line >> first;
    if (first == "safe") {
      int id = 0;
      while (line >> id) out.model.set_safe(id - 1, true);
      continue;
    }
    int a = 0, c = 0;
    double cost = 0.0;
    if (!(line >> a >> cost >> c)) throw std::runtime_error("model file: malformed control line");
    Control control{cost, c, {}};
    int j = 0;
    double p = 0.0;
    while (line >> j >> p) control.transitions.push_back({j - 1, p});
    if (control.transitions.empty()) throw std::runtime_error("model file: control without successors");
    out.model.add_control(std::stoi(first) - 1, std::move(control));
  }
  return out;
}

SSPFile read_ssp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_ssp(in);
}

}  // namespace budgetpath
