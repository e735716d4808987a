#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyopt/cse.hpp"
#include "polyopt/horner.hpp"
#include "polyopt/polynomial.hpp"
#include "polyopt/rng.hpp"

namespace polyopt {

/// Which end of the variable order the tree search pins down. Front:
/// tree-chosen variables form the leading (outermost-extracted) part of
/// the order; Back: they form the trailing (innermost) part, first choice
/// innermost. Structured inputs tend to be sensitive at the back, the
/// resultant family at the front.
enum class Direction : std::uint8_t { Front, Back };

inline const char* to_string(Direction d) { return d == Direction::Front ? "front" : "back"; }

struct MctsConfig {
  std::int64_t expansions = 1000;  // N, the search budget
  double cp = 1.0;                 // exploitation/exploration constant
  Direction direction = Direction::Back;
  std::uint64_t seed = 0;
};

/// Search tree node. `visits` counts backpropagations through the node;
/// `score_sum` accumulates the simulation scores.
struct MctsNode {
  VarId chosen = -1;  // -1 at the root
  std::int64_t visits = 0;
  double score_sum = 0.0;
  bool terminal = false;
  std::vector<std::unique_ptr<MctsNode>> children;

  double mean_score() const { return visits > 0 ? score_sum / static_cast<double>(visits) : 0.0; }
};

struct TraceEntry {
  std::int64_t expansion;   // 1-based cycle index
  std::int64_t cost_total;  // operations of this simulation's code
  double score;             // naive total / cost_total
};

struct SearchResult {
  VariableOrder best_order;
  OpCount best_cost;
  InstructionSeq best_code;
  std::vector<TraceEntry> trace;
};

/// Upper confidence bound for trees: mean score plus an exploration bonus,
///   <x> + 2 cp sqrt(2 ln(parent_n) / child_n).
/// Unvisited children score +infinity so they are tried first.
inline double uct_score(const MctsNode& child, std::int64_t parent_visits, double cp) {
  if (child.visits == 0) return std::numeric_limits<double>::infinity();
  const double bonus = 2.0 * cp *
                       std::sqrt(2.0 * std::log(static_cast<double>(parent_visits)) /
                                 static_cast<double>(child.visits));
  return child.mean_score() + bonus;
}

/// Assembles a complete variable order from the tree-chosen prefix `path`
/// and the simulation-completed `remaining` part. Front places the path
/// first (outermost); Back places it last and reversed, so the first
/// variable chosen by the tree is the innermost of the order.
inline VariableOrder order_from_path(const std::vector<VarId>& path,
                                     const std::vector<VarId>& remaining, Direction direction) {
  VariableOrder order;
  order.reserve(path.size() + remaining.size());
  if (direction == Direction::Front) {
    order.insert(order.end(), path.begin(), path.end());
    order.insert(order.end(), remaining.begin(), remaining.end());
  } else {
    order.insert(order.end(), remaining.begin(), remaining.end());
    order.insert(order.end(), path.rbegin(), path.rend());
  }
  return order;
}

/// Most-occurring variable first; ties by ascending id. "Occurring" counts
/// the terms a variable appears in, not its multiplicity.
inline VariableOrder occurrence_order(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no variable order");
  const auto counts = occurrence_counts(p);
  VariableOrder order;
  order.reserve(counts.size());
  for (const auto& [v, c] : counts) order.push_back(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](VarId a, VarId b) { return counts.at(a) > counts.at(b); });
  return order;
}

namespace detail {

struct Evaluation {
  OpCount cost;
  InstructionSeq code;
};

inline Evaluation evaluate_order(const Polynomial& p, const VariableOrder& order) {
  ExprDag dag = horner_transform(p, order);
  Evaluation ev;
  ev.code = cse(dag);
  ev.cost = instruction_count(ev.code);
  return ev;
}

inline double simulation_score(std::int64_t naive_total, std::int64_t optimized_total) {
  // both clamped to >= 1: degenerate one-monomial inputs would otherwise
  // produce 0/0 or a zero score
  return static_cast<double>(std::max<std::int64_t>(1, naive_total)) /
         static_cast<double>(std::max<std::int64_t>(1, optimized_total));
}

}  // namespace detail

/// Monte Carlo tree search over variable orders. Each cycle selects a
/// node by UCT while fully expanded, adds one uniformly random unchosen
/// child, completes the order with the remaining variables shuffled
/// uniformly, scores the Horner+CSE code of that order, and adds the
/// score along the path back to the root. Returns the cheapest code seen
/// in any simulation. Deterministic for a fixed config.
///
/// Fully explored subtrees are marked terminal and skipped; once the
/// whole tree is exhausted remaining cycles are no-ops, so the root visit
/// count can stay below cfg.expansions.
inline SearchResult mcts_optimize(const Polynomial& p, const MctsConfig& cfg,
                                  MctsNode* tree_out = nullptr) {
  if (cfg.expansions < 1) throw std::invalid_argument("expansions must be >= 1");
  if (!(cfg.cp > 0.0)) throw std::invalid_argument("cp must be > 0");
  const std::vector<VarId> vars = variables_of(p);
  if (vars.empty()) throw std::invalid_argument("polynomial has no variables");
  const std::size_t num_vars = vars.size();
  const std::int64_t naive_total = naive_op_count(p).total();

  Rng rng(cfg.seed);
  MctsNode root;
  SearchResult result;
  bool have_best = false;

  std::vector<MctsNode*> path;
  std::vector<VarId> chosen;
  std::vector<VarId> scratch;

  for (std::int64_t cycle = 1; cycle <= cfg.expansions; ++cycle) {
    if (root.terminal) break;  // every order reachable from the tree is explored

    // selection: descend while fully expanded
    path.clear();
    chosen.clear();
    MctsNode* node = &root;
    path.push_back(node);
    while (node->children.size() == num_vars - chosen.size() && !node->children.empty()) {
      MctsNode* next = nullptr;
      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto& child : node->children) {
        if (child->terminal) continue;
        const double score = uct_score(*child, node->visits, cfg.cp);
        if (score > best_score) {  // ties keep the lowest child index
          best_score = score;
          next = child.get();
        }
      }
      if (next == nullptr) throw std::logic_error("non-terminal node with only terminal children");
      node = next;
      path.push_back(node);
      chosen.push_back(node->chosen);
    }

    // expansion: add one uniformly random unchosen variable
    if (chosen.size() < num_vars) {
      scratch.clear();
      for (VarId v : vars) {
        bool used = std::find(chosen.begin(), chosen.end(), v) != chosen.end();
        for (const auto& child : node->children) used = used || child->chosen == v;
        if (!used) scratch.push_back(v);
      }
      auto child = std::make_unique<MctsNode>();
      child->chosen = scratch[static_cast<std::size_t>(rng.below(scratch.size()))];
      node->children.push_back(std::move(child));
      node = node->children.back().get();
      path.push_back(node);
      chosen.push_back(node->chosen);
    }

    // simulation: complete the order uniformly at random
    scratch.clear();
    for (VarId v : vars)
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) scratch.push_back(v);
    rng.shuffle(scratch);
    const VariableOrder order = order_from_path(chosen, scratch, cfg.direction);
    detail::Evaluation ev = detail::evaluate_order(p, order);
    const std::int64_t total = ev.cost.total();
    const double score = detail::simulation_score(naive_total, total);

    if (!have_best || total < result.best_cost.total()) {
      result.best_order = order;
      result.best_cost = ev.cost;
      result.best_code = std::move(ev.code);
      have_best = true;
    }
    result.trace.push_back(TraceEntry{cycle, total, score});

    // backpropagation, root included
    for (MctsNode* n : path) {
      n->visits += 1;
      n->score_sum += score;
    }

    // terminal bookkeeping: a full-depth leaf is deterministic and never
    // resampled; exhaustion propagates to fully expanded ancestors
    if (chosen.size() == num_vars) {
      node->terminal = true;
      for (std::size_t i = path.size() - 1; i-- > 0;) {
        MctsNode* ancestor = path[i];
        const std::size_t depth = i;  // path[0] is the root
        if (ancestor->children.size() != num_vars - depth) break;
        bool all_terminal = true;
        for (const auto& child : ancestor->children) all_terminal &= child->terminal;
        if (!all_terminal) break;
        ancestor->terminal = true;
      }
    }
  }

  if (tree_out != nullptr) *tree_out = std::move(root);
  return result;
}

/// Tries every permutation of the variables of p; the small-instance
/// oracle. Permutations are enumerated in lexicographic id order and the
/// first strict improvement is kept, so the result is deterministic.
inline SearchResult exhaustive_search(const Polynomial& p, int max_vars = 8) {
  const std::vector<VarId> vars = variables_of(p);
  if (vars.empty()) throw std::invalid_argument("polynomial has no variables");
  if (static_cast<int>(vars.size()) > max_vars)
    throw ResourceLimitError("too many variables for exhaustive search: " +
                             std::to_string(vars.size()) + " > " + std::to_string(max_vars));
  const std::int64_t naive_total = naive_op_count(p).total();

  SearchResult result;
  bool have_best = false;
  VariableOrder order = vars;
  std::int64_t index = 0;
  do {
    ++index;
    detail::Evaluation ev = detail::evaluate_order(p, order);
    const std::int64_t total = ev.cost.total();
    result.trace.push_back(
        TraceEntry{index, total, detail::simulation_score(naive_total, total)});
    if (!have_best || total < result.best_cost.total()) {
      result.best_order = order;
      result.best_cost = ev.cost;
      result.best_code = std::move(ev.code);
      have_best = true;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return result;
}

struct RandomSearchResult {
  SearchResult result;
  std::map<std::int64_t, std::int64_t> histogram;  // cost total -> samples
};

/// Uniformly random complete orders; the paper-style baseline
/// distribution. Reproducible for a fixed seed.
inline RandomSearchResult random_order_search(const Polynomial& p, std::int64_t samples,
                                              std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const std::vector<VarId> vars = variables_of(p);
  if (vars.empty()) throw std::invalid_argument("polynomial has no variables");
  const std::int64_t naive_total = naive_op_count(p).total();

  Rng rng(seed);
  RandomSearchResult out;
  bool have_best = false;
  for (std::int64_t i = 1; i <= samples; ++i) {
    VariableOrder order = vars;
    rng.shuffle(order);
    detail::Evaluation ev = detail::evaluate_order(p, order);
    const std::int64_t total = ev.cost.total();
    out.histogram[total] += 1;
    out.result.trace.push_back(
        TraceEntry{i, total, detail::simulation_score(naive_total, total)});
    if (!have_best || total < out.result.best_cost.total()) {
      out.result.best_order = order;
      out.result.best_cost = ev.cost;
      out.result.best_code = std::move(ev.code);
      have_best = true;
    }
  }
  return out;
}

}  // namespace polyopt
