#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyopt/errors.hpp"
#include "polyopt/numeric.hpp"
#include "polyopt/op_count.hpp"
#include "polyopt/variable.hpp"

namespace polyopt {

using NodeId = std::int32_t;

enum class NodeKind : std::uint8_t { Const, Var, Mul, Add };

/// N-ary expression DAG in an arena, hash-consed: structurally identical
/// subtrees share one node id, so id equality is structural equality.
///
/// Canonical form, maintained by the builder methods:
///   - Add/Mul have >= 2 children; no Add directly under an Add and no Mul
///     directly under a Mul (nested nodes of the same kind are flattened);
///   - children are sorted by structural order (constants, then variables
///     by id, then composites);
///   - a Mul carries at most one constant child, never +1; a leading
///     Const(-1) child only carries the sign of an otherwise unit
///     coefficient.
class ExprDag {
 public:
  ExprDag() { children_pool_.reserve(64); }

  NodeId add_const(const BigInt& value) {
    auto [it, inserted] = const_ids_.try_emplace(value, static_cast<std::int32_t>(consts_.size()));
    if (inserted) consts_.push_back(value);
    return intern(NodeKind::Const, it->second, {});
  }

  NodeId add_var(VarId v) { return intern(NodeKind::Var, v, {}); }

  /// Sum node. Flattens nested sums, folds constant children together,
  /// drops a zero constant, and collapses singleton sums.
  NodeId add_sum(std::vector<NodeId> children) {
    std::vector<NodeId> flat;
    flat.reserve(children.size());
    BigInt const_part(0);
    bool has_const = false;
    for (NodeId c : children) {
      const Node& node = nodes_[static_cast<std::size_t>(c)];
      if (node.kind == NodeKind::Add) {
        for (std::int32_t k = 0; k < node.child_count; ++k) {
          NodeId g = children_pool_[static_cast<std::size_t>(node.child_begin + k)];
          if (kind(g) == NodeKind::Const) {
            const_part += const_value(g);
            has_const = true;
          } else {
            flat.push_back(g);
          }
        }
      } else if (node.kind == NodeKind::Const) {
        const_part += consts_[static_cast<std::size_t>(node.payload)];
        has_const = true;
      } else {
        flat.push_back(c);
      }
    }
    if (has_const && const_part != 0) flat.push_back(add_const(const_part));
    if (flat.empty()) return add_const(0);
    if (flat.size() == 1) return flat[0];
    sort_children(flat);
    return intern(NodeKind::Add, 0, flat);
  }

  /// Product node. Flattens nested products and multiplies constant
  /// children into a single leading constant; +1 disappears, a bare sign
  /// stays as Const(-1), and a zero constant annihilates the product.
  NodeId add_product(std::vector<NodeId> children) {
    std::vector<NodeId> flat;
    flat.reserve(children.size());
    BigInt const_part(1);
    for (NodeId c : children) {
      const Node& node = nodes_[static_cast<std::size_t>(c)];
      if (node.kind == NodeKind::Mul) {
        for (std::int32_t k = 0; k < node.child_count; ++k) {
          NodeId g = children_pool_[static_cast<std::size_t>(node.child_begin + k)];
          if (kind(g) == NodeKind::Const)
            const_part *= const_value(g);
          else
            flat.push_back(g);
        }
      } else if (node.kind == NodeKind::Const) {
        const_part *= consts_[static_cast<std::size_t>(node.payload)];
      } else {
        flat.push_back(c);
      }
    }
    if (const_part == 0) return add_const(0);
    if (flat.empty()) return add_const(const_part);
    if (const_part != 1) flat.push_back(add_const(const_part));
    if (flat.size() == 1) return flat[0];
    sort_children(flat);
    return intern(NodeKind::Mul, 0, flat);
  }

  void set_root(NodeId id) { root_ = id; }
  NodeId root() const { return root_; }
  std::size_t node_count() const { return nodes_.size(); }

  NodeKind kind(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].kind; }

  const BigInt& const_value(NodeId id) const {
    return consts_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(id)].payload)];
  }

  VarId var_of(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].payload; }

  std::int32_t child_count(NodeId id) const {
    return nodes_[static_cast<std::size_t>(id)].child_count;
  }

  NodeId child(NodeId id, std::int32_t k) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    return children_pool_[static_cast<std::size_t>(node.child_begin + k)];
  }

  /// Total order on node structures: constants by value, then variables by
  /// id, then products, then sums; composites compare child-lexicographic.
  int compare(NodeId a, NodeId b) const {
    if (a == b) return 0;  // hash-consed: equal id iff equal structure
    const Node& na = nodes_[static_cast<std::size_t>(a)];
    const Node& nb = nodes_[static_cast<std::size_t>(b)];
    if (na.kind != nb.kind) return na.kind < nb.kind ? -1 : 1;
    switch (na.kind) {
      case NodeKind::Const: {
        const BigInt& va = consts_[static_cast<std::size_t>(na.payload)];
        const BigInt& vb = consts_[static_cast<std::size_t>(nb.payload)];
        return va < vb ? -1 : 1;  // distinct ids, so values differ
      }
      case NodeKind::Var:
        return na.payload < nb.payload ? -1 : 1;
      default: {
        const std::int32_t count = std::min(na.child_count, nb.child_count);
        for (std::int32_t k = 0; k < count; ++k) {
          int c = compare(children_pool_[static_cast<std::size_t>(na.child_begin + k)],
                          children_pool_[static_cast<std::size_t>(nb.child_begin + k)]);
          if (c != 0) return c;
        }
        return na.child_count < nb.child_count ? -1 : 1;
      }
    }
  }

 private:
  struct Node {
    NodeKind kind;
    std::int32_t payload;      // Const: index into consts_; Var: VarId
    std::int32_t child_begin;  // composites: slice of children_pool_
    std::int32_t child_count;
  };

  void sort_children(std::vector<NodeId>& ids) {
    std::sort(ids.begin(), ids.end(), [this](NodeId a, NodeId b) { return compare(a, b) < 0; });
  }

  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  NodeId intern(NodeKind k, std::int32_t payload, const std::vector<NodeId>& children) {
    std::uint64_t h = static_cast<std::uint64_t>(k);
    h = mix(h, static_cast<std::uint64_t>(payload));
    for (NodeId c : children) h = mix(h, static_cast<std::uint64_t>(c));
    auto range = intern_table_.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
      NodeId id = it->second;
      const Node& node = nodes_[static_cast<std::size_t>(id)];
      if (node.kind != k || node.payload != payload) continue;
      if (node.child_count != static_cast<std::int32_t>(children.size())) continue;
      bool same = true;
      for (std::int32_t i = 0; i < node.child_count && same; ++i)
        same = children_pool_[static_cast<std::size_t>(node.child_begin + i)] == children[i];
      if (same) return id;
    }
    Node node;
    node.kind = k;
    node.payload = payload;
    node.child_begin = static_cast<std::int32_t>(children_pool_.size());
    node.child_count = static_cast<std::int32_t>(children.size());
    children_pool_.insert(children_pool_.end(), children.begin(), children.end());
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(node);
    intern_table_.emplace(h, id);
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<NodeId> children_pool_;
  std::vector<BigInt> consts_;
  std::map<BigInt, std::int32_t> const_ids_;
  std::unordered_multimap<std::uint64_t, NodeId> intern_table_;
  NodeId root_ = -1;
};

/// Operation count of the expression read as a tree: shared nodes are
/// charged at every occurrence. An n-ary node costs n-1 operations.
inline OpCount tree_op_count(const ExprDag& dag) {
  if (dag.root() < 0) return {};
  std::vector<OpCount> memo(dag.node_count(), OpCount{-1, -1});
  // nodes are created children-first, so a forward sweep is bottom-up
  for (NodeId id = 0; id < static_cast<NodeId>(dag.node_count()); ++id) {
    OpCount oc;
    const NodeKind k = dag.kind(id);
    if (k == NodeKind::Add || k == NodeKind::Mul) {
      const std::int32_t n = dag.child_count(id);
      for (std::int32_t i = 0; i < n; ++i) oc += memo[static_cast<std::size_t>(dag.child(id, i))];
      if (k == NodeKind::Add)
        oc.adds += n - 1;
      else
        oc.muls += n - 1;
    } else {
      oc = OpCount{0, 0};
    }
    memo[static_cast<std::size_t>(id)] = oc;
  }
  return memo[static_cast<std::size_t>(dag.root())];
}

/// Exact evaluation of the DAG at a rational point.
inline Rational evaluate(const ExprDag& dag, const std::map<VarId, Rational>& point) {
  if (dag.root() < 0) throw std::invalid_argument("empty expression");
  std::vector<Rational> memo(dag.node_count());
  for (NodeId id = 0; id < static_cast<NodeId>(dag.node_count()); ++id) {
    switch (dag.kind(id)) {
      case NodeKind::Const:
        memo[static_cast<std::size_t>(id)] = Rational(dag.const_value(id));
        break;
      case NodeKind::Var: {
        auto it = point.find(dag.var_of(id));
        if (it == point.end()) throw MissingAssignmentError(dag.var_of(id));
        memo[static_cast<std::size_t>(id)] = it->second;
        break;
      }
      case NodeKind::Add: {
        Rational sum(0);
        for (std::int32_t i = 0; i < dag.child_count(id); ++i)
          sum += memo[static_cast<std::size_t>(dag.child(id, i))];
        memo[static_cast<std::size_t>(id)] = sum;
        break;
      }
      case NodeKind::Mul: {
        Rational prod(1);
        for (std::int32_t i = 0; i < dag.child_count(id); ++i)
          prod *= memo[static_cast<std::size_t>(dag.child(id, i))];
        memo[static_cast<std::size_t>(id)] = prod;
        break;
      }
    }
  }
  return memo[static_cast<std::size_t>(dag.root())];
}

namespace detail {
inline void render_node(const ExprDag& dag, NodeId id, const Workspace& ws, std::string& out) {
  switch (dag.kind(id)) {
    case NodeKind::Const:
      out += dag.const_value(id).str();
      break;
    case NodeKind::Var:
      out += ws.name(dag.var_of(id));
      break;
    case NodeKind::Mul: {
      const std::int32_t n = dag.child_count(id);
      bool bare_sign = false;
      for (std::int32_t i = 0; i < n; ++i) {
        NodeId first = dag.child(id, i);
        if (i == 0 && dag.kind(first) == NodeKind::Const && dag.const_value(first) == -1) {
          out += '-';  // sign carrier prints as a bare minus
          bare_sign = true;
          continue;
        }
        if (i > (bare_sign ? 1 : 0)) out += '*';
        NodeId c = dag.child(id, i);
        if (dag.kind(c) == NodeKind::Add) {
          out += '(';
          render_node(dag, c, ws, out);
          out += ')';
        } else {
          render_node(dag, c, ws, out);
        }
      }
      break;
    }
    case NodeKind::Add: {
      const std::int32_t n = dag.child_count(id);
      for (std::int32_t i = 0; i < n; ++i) {
        std::string piece;
        render_node(dag, dag.child(id, i), ws, piece);
        if (i > 0 && !piece.empty() && piece[0] != '-') out += '+';
        out += piece;
      }
      break;
    }
  }
}
}  // namespace detail

/// Parenthesized rendering of the expression, e.g. "y+x*(-3+5*z+...)".
inline std::string to_string(const ExprDag& dag, const Workspace& ws) {
  if (dag.root() < 0) return "";
  std::string out;
  detail::render_node(dag, dag.root(), ws, out);
  return out;
}

}  // namespace polyopt
