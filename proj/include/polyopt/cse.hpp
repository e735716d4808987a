#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "polyopt/expr_dag.hpp"

namespace polyopt {

enum class OperandKind : std::uint8_t { Const, Var, Temp };

struct Operand {
  OperandKind kind;
  std::int32_t index;  // Const: constant pool slot; Var: VarId; Temp: dest id

  friend bool operator==(const Operand& a, const Operand& b) {
    return a.kind == b.kind && a.index == b.index;
  }
};

enum class OpCode : std::uint8_t { Add, Mul };

struct Instruction {
  std::int32_t dest;
  OpCode op;
  Operand lhs, rhs;
};

/// Straight-line three-address code: every temp is defined before use,
/// dest ids are dense from 0, and no two instructions share the same
/// (op, lhs, rhs) triple. The length of the sequence is the cost.
class InstructionSeq {
 public:
  std::int32_t intern_const(const BigInt& value) {
    auto [it, inserted] = const_ids_.try_emplace(value, static_cast<std::int32_t>(consts_.size()));
    if (inserted) consts_.push_back(value);
    return it->second;
  }

  Operand push(OpCode op, Operand lhs, Operand rhs) {
    const std::int32_t dest = static_cast<std::int32_t>(instrs_.size());
    instrs_.push_back(Instruction{dest, op, lhs, rhs});
    return Operand{OperandKind::Temp, dest};
  }

  void set_result(Operand r) { result_ = r; }

  const std::vector<Instruction>& instructions() const { return instrs_; }
  Operand result() const { return result_; }
  const BigInt& const_value(std::int32_t slot) const {
    return consts_[static_cast<std::size_t>(slot)];
  }
  const std::vector<BigInt>& consts() const { return consts_; }

 private:
  std::vector<Instruction> instrs_;
  std::vector<BigInt> consts_;
  std::map<BigInt, std::int32_t> const_ids_;
  Operand result_{OperandKind::Const, -1};
};

namespace detail {

// Packs an operand into 34 bits.
inline std::uint64_t pack_operand(Operand o) {
  return (static_cast<std::uint64_t>(o.kind) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(o.index));
}

inline bool operand_less(Operand a, Operand b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.index < b.index;
}

// Exact (op, lhs, rhs) key; no collisions by construction.
struct PairKey {
  std::uint64_t hi, lo;
  friend bool operator==(const PairKey& x, const PairKey& y) {
    return x.hi == y.hi && x.lo == y.lo;
  }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    std::uint64_t h = k.hi * 0x9e3779b97f4a7c15ULL;
    h ^= k.lo + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Common subexpression elimination: each n-ary DAG node is binarized
/// into a left-associated chain over its (already canonically ordered)
/// children, and identical (op, lhs, rhs) triples are assigned one temp.
/// Operands of one instruction are stored in a fixed order (constants,
/// variables, temps), so commutative duplicates collapse too.
inline InstructionSeq cse(const ExprDag& dag) {
  InstructionSeq seq;
  if (dag.root() < 0) throw std::invalid_argument("empty expression");

  std::unordered_map<detail::PairKey, std::int32_t, detail::PairKeyHash> pair_temp;
  pair_temp.reserve(dag.node_count() * 2);

  auto emit = [&](OpCode op, Operand a, Operand b) {
    if (detail::operand_less(b, a)) std::swap(a, b);
    const detail::PairKey key{(static_cast<std::uint64_t>(op) << 40) | detail::pack_operand(a),
                              detail::pack_operand(b)};
    auto it = pair_temp.find(key);
    if (it != pair_temp.end()) return Operand{OperandKind::Temp, it->second};
    Operand dest = seq.push(op, a, b);
    pair_temp.emplace(key, dest.index);
    return dest;
  };

  // construction may leave unreferenced nodes behind (flattening); only
  // nodes reachable from the root produce instructions
  std::vector<bool> live(dag.node_count(), false);
  live[static_cast<std::size_t>(dag.root())] = true;
  for (NodeId id = static_cast<NodeId>(dag.node_count()); id-- > 0;) {
    if (!live[static_cast<std::size_t>(id)]) continue;
    if (dag.kind(id) == NodeKind::Add || dag.kind(id) == NodeKind::Mul)
      for (std::int32_t i = 0; i < dag.child_count(id); ++i)
        live[static_cast<std::size_t>(dag.child(id, i))] = true;
  }

  std::vector<Operand> operand_of(dag.node_count());
  for (NodeId id = 0; id < static_cast<NodeId>(dag.node_count()); ++id) {
    if (!live[static_cast<std::size_t>(id)]) continue;
    switch (dag.kind(id)) {
      case NodeKind::Const:
        operand_of[static_cast<std::size_t>(id)] =
            Operand{OperandKind::Const, seq.intern_const(dag.const_value(id))};
        break;
      case NodeKind::Var:
        operand_of[static_cast<std::size_t>(id)] = Operand{OperandKind::Var, dag.var_of(id)};
        break;
      case NodeKind::Add:
      case NodeKind::Mul: {
        const OpCode op = dag.kind(id) == NodeKind::Add ? OpCode::Add : OpCode::Mul;
        Operand acc = operand_of[static_cast<std::size_t>(dag.child(id, 0))];
        for (std::int32_t i = 1; i < dag.child_count(id); ++i)
          acc = emit(op, acc, operand_of[static_cast<std::size_t>(dag.child(id, i))]);
        operand_of[static_cast<std::size_t>(id)] = acc;
        break;
      }
    }
  }
  seq.set_result(operand_of[static_cast<std::size_t>(dag.root())]);
  return seq;
}

inline OpCount instruction_count(const InstructionSeq& seq) {
  OpCount oc;
  for (const auto& instr : seq.instructions())
    (instr.op == OpCode::Add ? oc.adds : oc.muls) += 1;
  return oc;
}

/// Executes the sequence over exact rational arithmetic.
inline Rational replay(const InstructionSeq& seq, const std::map<VarId, Rational>& point) {
  auto value_of = [&](Operand o, const std::vector<Rational>& temps) -> Rational {
    switch (o.kind) {
      case OperandKind::Const:
        return Rational(seq.const_value(o.index));
      case OperandKind::Var: {
        auto it = point.find(o.index);
        if (it == point.end()) throw MissingAssignmentError(o.index);
        return it->second;
      }
      default:
        return temps[static_cast<std::size_t>(o.index)];
    }
  };
  std::vector<Rational> temps(seq.instructions().size());
  for (const auto& instr : seq.instructions()) {
    const Rational a = value_of(instr.lhs, temps);
    const Rational b = value_of(instr.rhs, temps);
    temps[static_cast<std::size_t>(instr.dest)] = instr.op == OpCode::Add ? Rational(a + b) : Rational(a * b);
  }
  if (seq.result().kind == OperandKind::Const && seq.result().index < 0)
    throw std::invalid_argument("instruction sequence has no result");
  return value_of(seq.result(), temps);
}

/// Rebuilds an expression DAG from straight-line code (used to check that
/// a second elimination pass has nothing left to do).
inline ExprDag dag_from_instructions(const InstructionSeq& seq) {
  ExprDag dag;
  std::vector<NodeId> temp_node(seq.instructions().size());
  auto node_of = [&](Operand o) {
    switch (o.kind) {
      case OperandKind::Const:
        return dag.add_const(seq.const_value(o.index));
      case OperandKind::Var:
        return dag.add_var(o.index);
      default:
        return temp_node[static_cast<std::size_t>(o.index)];
    }
  };
  for (const auto& instr : seq.instructions()) {
    std::vector<NodeId> args{node_of(instr.lhs), node_of(instr.rhs)};
    temp_node[static_cast<std::size_t>(instr.dest)] =
        instr.op == OpCode::Add ? dag.add_sum(std::move(args)) : dag.add_product(std::move(args));
  }
  dag.set_root(node_of(seq.result()));
  return dag;
}

}  // namespace polyopt
