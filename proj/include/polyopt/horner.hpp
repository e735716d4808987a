#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "polyopt/expr_dag.hpp"
#include "polyopt/polynomial.hpp"

namespace polyopt {

/// Sequence of distinct variables; position 0 is extracted first and ends
/// up outermost in the nested form.
using VariableOrder = std::vector<VarId>;

namespace detail {

class HornerBuilder {
 public:
  HornerBuilder(const Polynomial& p, const VariableOrder& order, ExprDag& dag)
      : poly_(p), order_(order), dag_(dag) {
    const std::size_t terms = p.term_count();
    const std::size_t levels = order.size();
    exps_.assign(terms * levels, 0);
    VarId max_id = -1;
    for (VarId v : order) max_id = std::max(max_id, v);
    level_of_.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (std::size_t j = 0; j < levels; ++j) {
      if (order[j] < 0 || level_of_[static_cast<std::size_t>(order[j])] != -1)
        throw std::invalid_argument("variable order contains duplicates");
      level_of_[static_cast<std::size_t>(order[j])] = static_cast<std::int32_t>(j);
    }
    for (std::size_t i = 0; i < terms; ++i) {
      for (const auto& [v, e] : p.terms()[i].exponents) {
        const std::int32_t lv = level_of(v);
        if (lv >= 0) exps_[i * levels + static_cast<std::size_t>(lv)] = e;
      }
    }
    index_.resize(terms);
    std::iota(index_.begin(), index_.end(), 0);
  }

  NodeId build() { return transform(0, poly_.term_count(), 0); }

 private:
  std::int32_t exp_at(std::size_t term, std::size_t level) const {
    return exps_[term * order_.size() + level];
  }

  std::int32_t level_of(VarId v) const {
    return static_cast<std::size_t>(v) < level_of_.size() ? level_of_[static_cast<std::size_t>(v)]
                                                          : -1;
  }

  // Emits one monomial as a flat product; factors of already extracted
  // variables (order levels below `level`) are excluded. Variables absent
  // from the order stay as plain factors.
  NodeId emit_term(std::size_t term, std::size_t level) {
    const Term& t = poly_.terms()[term];
    std::vector<NodeId> factors;
    if (!is_unit(t.coeff)) factors.push_back(dag_.add_const(t.coeff));
    for (const auto& [v, e] : t.exponents) {
      const std::int32_t lv = level_of(v);
      if (lv >= 0 && lv < static_cast<std::int32_t>(level)) continue;
      for (std::int32_t k = 0; k < e; ++k) factors.push_back(dag_.add_var(v));
    }
    if (factors.empty()) return dag_.add_const(t.coeff);  // +/-1 constant
    if (t.coeff == -1) factors.push_back(dag_.add_const(t.coeff));
    return dag_.add_product(std::move(factors));
  }

  // Transforms the term range [lo, hi) of index_, extracting order_[level:].
  NodeId transform(std::size_t lo, std::size_t hi, std::size_t level) {
    // skip levels whose variable does not occur in this sub-polynomial
    while (level < order_.size()) {
      bool occurs = false;
      for (std::size_t k = lo; k < hi && !occurs; ++k) occurs = exp_at(index_[k], level) > 0;
      if (occurs) break;
      ++level;
    }
    if (hi - lo == 1) return emit_term(index_[lo], level);
    if (level == order_.size())
      throw std::invalid_argument("variable order is missing a variable of the polynomial");

    const std::size_t levels = order_.size();
    std::sort(index_.begin() + static_cast<std::ptrdiff_t>(lo),
              index_.begin() + static_cast<std::ptrdiff_t>(hi),
              [&](std::size_t a, std::size_t b) {
                const std::int32_t ea = exps_[a * levels + level];
                const std::int32_t eb = exps_[b * levels + level];
                if (ea != eb) return ea < eb;
                return a < b;
              });

    // group boundaries by the exponent of the pivot variable, ascending
    std::vector<std::pair<std::int32_t, std::size_t>> groups;  // (exponent, begin)
    for (std::size_t k = lo; k < hi; ++k) {
      const std::int32_t e = exp_at(index_[k], level);
      if (groups.empty() || groups.back().first != e) groups.emplace_back(e, k);
    }

    const VarId pivot = order_[level];
    auto group_expr = [&](std::size_t g) {
      const std::size_t begin = groups[g].second;
      const std::size_t end = g + 1 < groups.size() ? groups[g + 1].second : hi;
      return transform(begin, end, level + 1);
    };

    NodeId acc = group_expr(groups.size() - 1);
    for (std::size_t g = groups.size() - 1; g-- > 0;) {
      const std::int32_t gap = groups[g + 1].first - groups[g].first;
      std::vector<NodeId> factors;
      factors.reserve(static_cast<std::size_t>(gap) + 1);
      for (std::int32_t k = 0; k < gap; ++k) factors.push_back(dag_.add_var(pivot));
      factors.push_back(acc);
      acc = dag_.add_sum({group_expr(g), dag_.add_product(std::move(factors))});
    }
    const std::int32_t lead = groups.front().first;
    if (lead > 0) {
      std::vector<NodeId> factors;
      factors.reserve(static_cast<std::size_t>(lead) + 1);
      for (std::int32_t k = 0; k < lead; ++k) factors.push_back(dag_.add_var(pivot));
      factors.push_back(acc);
      acc = dag_.add_product(std::move(factors));
    }
    return acc;
  }

  const Polynomial& poly_;
  const VariableOrder& order_;
  ExprDag& dag_;
  std::vector<std::int32_t> exps_;      // dense terms x levels exponent matrix
  std::vector<std::int32_t> level_of_;  // var id -> order level, -1 if absent
  std::vector<std::size_t> index_;
};

}  // namespace detail

/// Rewrites p in nested sparse-Horner form for the given variable order:
/// terms are grouped by the power of order[0], gap powers become repeated
/// factors, and each grouped coefficient recurses on the rest of the
/// order. Extra order variables are ignored. Variables not in the order
/// may survive as opaque factors inside single terms (symbolic
/// coefficients, e.g. a univariate scheme over multivariate coefficients);
/// if they leave a multi-term group with nothing left to extract, the
/// order is reported as incomplete. Evaluation is preserved exactly.
inline ExprDag horner_transform(const Polynomial& p, const VariableOrder& order) {
  ExprDag dag;
  if (p.is_zero()) throw std::invalid_argument("cannot transform the zero polynomial");
  if (p.is_constant()) {
    dag.set_root(dag.add_const(p.terms()[0].coeff));
    return dag;
  }
  detail::HornerBuilder builder(p, order, dag);
  dag.set_root(builder.build());
  return dag;
}

}  // namespace polyopt
