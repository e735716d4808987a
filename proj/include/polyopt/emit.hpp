#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyopt/cse.hpp"
#include "polyopt/op_count.hpp"
#include "polyopt/search.hpp"

#include "json.hpp"

namespace polyopt {

// ---------------------------------------------------------------------------
// Three-address code text
// ---------------------------------------------------------------------------

namespace detail {
inline std::string operand_text(const InstructionSeq& seq, Operand o, const Workspace& ws) {
  switch (o.kind) {
    case OperandKind::Const:
      return seq.const_value(o.index).str();
    case OperandKind::Var:
      return ws.name(o.index);
    default:
      return "t" + std::to_string(o.index);
  }
}
}  // namespace detail

/// One line per instruction, `t<k> = <lhs> <op> <rhs>`, then a final
/// `result = <operand>` line. Lines starting with '#' are comments and
/// are skipped by the parser.
inline std::string emit_tac(const InstructionSeq& seq, const Workspace& ws) {
  std::string out;
  for (const auto& instr : seq.instructions()) {
    out += "t" + std::to_string(instr.dest) + " = " + detail::operand_text(seq, instr.lhs, ws) +
           (instr.op == OpCode::Add ? " + " : " * ") + detail::operand_text(seq, instr.rhs, ws) +
           "\n";
  }
  out += "result = " + detail::operand_text(seq, seq.result(), ws) + "\n";
  return out;
}

/// Parses the emit_tac format back into a sequence.
inline InstructionSeq parse_tac(const std::string& text, Workspace& ws) {
  InstructionSeq seq;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::int64_t next_temp = 0;
  bool saw_result = false;

  auto parse_operand = [&](const std::string& token) -> Operand {
    if (token.empty()) throw ParseError("empty operand", line_no);
    if (token[0] == '-' || (token[0] >= '0' && token[0] <= '9'))
      return Operand{OperandKind::Const, seq.intern_const(BigInt(token))};
    if (token[0] == 't' && token.size() > 1 &&
        token.find_first_not_of("0123456789", 1) == std::string::npos) {
      const std::int64_t id = std::stoll(token.substr(1));
      if (id >= next_temp) throw ParseError("temp used before definition: " + token, line_no);
      return Operand{OperandKind::Temp, static_cast<std::int32_t>(id)};
    }
    return Operand{OperandKind::Var, ws.intern(token)};
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string dest, eq, lhs, op, rhs;
    if (!(tokens >> dest)) continue;
    if (dest[0] == '#') continue;
    if (saw_result) throw ParseError("content after result line", line_no);
    if (!(tokens >> eq >> lhs) || eq != "=")
      throw ParseError("expected '<dest> = ...'", line_no);
    if (dest == "result") {
      if (tokens >> op) throw ParseError("result line takes a single operand", line_no);
      seq.set_result(parse_operand(lhs));
      saw_result = true;
      continue;
    }
    if (dest[0] != 't' || std::stoll(dest.substr(1)) != next_temp)
      throw ParseError("destinations must be t0, t1, ... in order", line_no);
    if (!(tokens >> op >> rhs) || (op != "+" && op != "*"))
      throw ParseError("expected '<lhs> + <rhs>' or '<lhs> * <rhs>'", line_no);
    std::string extra;
    if (tokens >> extra) throw ParseError("trailing tokens", line_no);
    seq.push(op == "+" ? OpCode::Add : OpCode::Mul, parse_operand(lhs), parse_operand(rhs));
    ++next_temp;
  }
  if (!saw_result) throw ParseError("missing result line", line_no);
  return seq;
}

// ---------------------------------------------------------------------------
// C output
// ---------------------------------------------------------------------------

/// A self-contained double-precision C function, one parameter per
/// variable used by the sequence (ascending id). Exactness holds only for
/// the TAC replay path; this output rounds to double.
inline std::string emit_c_like(const InstructionSeq& seq, const Workspace& ws,
                               const std::string& function_name) {
  if (!is_valid_variable_name(function_name))
    throw std::invalid_argument("invalid function name: " + function_name);

  std::vector<VarId> vars;
  auto note = [&](Operand o) {
    if (o.kind == OperandKind::Var) vars.push_back(o.index);
  };
  for (const auto& instr : seq.instructions()) {
    note(instr.lhs);
    note(instr.rhs);
  }
  note(seq.result());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  auto c_operand = [&](Operand o) -> std::string {
    if (o.kind == OperandKind::Const) {
      const BigInt& v = seq.const_value(o.index);
      return v < 0 ? "(" + v.str() + ".0)" : v.str() + ".0";
    }
    return detail::operand_text(seq, o, ws);
  };

  std::string out;
  out += "/* generated polynomial evaluation; double precision (rounding applies) */\n";
  out += "double " + function_name + "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i > 0) out += ", ";
    out += "double " + ws.name(vars[i]);
  }
  out += ") {\n";
  for (const auto& instr : seq.instructions()) {
    out += "  const double t" + std::to_string(instr.dest) + " = " + c_operand(instr.lhs) +
           (instr.op == OpCode::Add ? " + " : " * ") + c_operand(instr.rhs) + ";\n";
  }
  out += "  return " + c_operand(seq.result()) + ";\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Stats and sweep rows
// ---------------------------------------------------------------------------

/// Everything one pipeline run reports: the three cost stages, the order
/// and configuration that produced them, and (optionally) the
/// per-expansion trace. Wall time is volatile and therefore only emitted
/// when explicitly requested; reruns of one config must be byte-identical.
struct StatsReport {
  std::string input_name;
  std::string method;
  OpCount naive, horner, cse;
  std::vector<std::string> order;  // outermost-extracted first
  std::optional<std::int64_t> mcts_n;
  std::optional<std::string> cp_text;  // original token, for byte-stable echo
  std::optional<std::string> direction;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  double wall_time_s = -1.0;
  bool include_timing = false;
  const std::vector<TraceEntry>* trace = nullptr;
  std::vector<std::string> code_lines;
};

/// Schema-versioned JSON document with stable field names.
inline std::string emit_stats(const StatsReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["input"] = report.input_name;
  doc["method"] = report.method;
  doc["naive"] = {{"adds", report.naive.adds},
                  {"muls", report.naive.muls},
                  {"total", report.naive.total()}};
  doc["horner"] = {{"adds", report.horner.adds},
                   {"muls", report.horner.muls},
                   {"total", report.horner.total()}};
  doc["cse"] = {{"adds", report.cse.adds},
                {"muls", report.cse.muls},
                {"total", report.cse.total()}};
  doc["order"] = report.order;
  nlohmann::json config = nlohmann::json::object();
  if (report.mcts_n) config["n"] = *report.mcts_n;
  if (report.cp_text) config["cp"] = *report.cp_text;
  if (report.direction) config["direction"] = *report.direction;
  if (report.seed) config["seed"] = *report.seed;
  if (report.samples) config["samples"] = *report.samples;
  doc["config"] = config;
  doc["wall_time_s"] = report.include_timing ? nlohmann::json(report.wall_time_s)
                                             : nlohmann::json(nullptr);
  if (report.trace != nullptr) {
    nlohmann::json rows = nlohmann::json::array();
    std::int64_t best = -1;
    for (const auto& entry : *report.trace) {
      if (best < 0 || entry.cost_total < best) best = entry.cost_total;
      rows.push_back({{"expansion", entry.expansion},
                      {"cost", entry.cost_total},
                      {"score", entry.score},
                      {"best", best}});
    }
    doc["trace"] = rows;
  } else {
    doc["trace"] = nlohmann::json::array();
  }
  if (!report.code_lines.empty()) doc["code"] = report.code_lines;
  return doc.dump(2) + "\n";
}

inline std::string sweep_csv_header() { return "cp,N,seed,best_total\n"; }

inline std::string sweep_csv_row(const std::string& cp_text, std::int64_t n, std::uint64_t seed,
                                 std::int64_t best_total) {
  return cp_text + "," + std::to_string(n) + "," + std::to_string(seed) + "," +
         std::to_string(best_total) + "\n";
}

}  // namespace polyopt
