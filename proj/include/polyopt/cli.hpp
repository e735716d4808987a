#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyopt/emit.hpp"
#include "polyopt/generators.hpp"
#include "polyopt/polynomial.hpp"
#include "polyopt/search.hpp"
#include "polyopt/sylvester.hpp"

#include "CLI11.hpp"

namespace polyopt::cli {

// Exit codes: 0 success, 2 usage error, 3 parse error, 4 resource cap.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitResource = 4;

namespace detail {

struct LoadedInput {
  Polynomial poly;
  std::string name;
  std::string family;
};

inline LoadedInput load_input(const std::string& path, const std::string& inline_expr,
                              Workspace& ws) {
  if (!inline_expr.empty() && !path.empty())
    throw CLI::ValidationError("give either an input file or --expr, not both");
  LoadedInput in;
  if (!inline_expr.empty()) {
    in.poly = parse_polynomial(inline_expr, ws);
    in.name = "<expr>";
  } else if (!path.empty()) {
    PolyFile file = read_polynomial_file(path, ws);
    in.poly = std::move(file.poly);
    in.family = std::move(file.family);
    in.name = std::filesystem::path(path).filename().string();
  } else {
    throw CLI::ValidationError("missing input: give a polynomial file or --expr");
  }
  return in;
}

inline void write_output(const std::string& out_path, const std::string& content,
                         std::ostream& stdout_stream) {
  if (out_path.empty()) {
    stdout_stream << content;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  file << content;
}

inline std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

inline Direction parse_direction(const std::string& text) {
  if (text == "front") return Direction::Front;
  if (text == "back") return Direction::Back;
  throw CLI::ValidationError("--direction must be 'front' or 'back'");
}

inline std::filesystem::path cache_dir_from(const std::string& flag) {
  return flag.empty() ? default_cache_dir() : std::filesystem::path(flag);
}

}  // namespace detail

struct OptimizeFlags {
  std::string input_path;
  std::string inline_expr;
  std::string method = "mcts";
  std::string order_csv;
  std::int64_t mcts_n = 1000;
  std::string cp_text = "1.0";
  std::string direction_text;  // empty: per-family default
  std::uint64_t seed = 0;
  std::int64_t samples = 1000;
  std::string format = "json";
  std::string out_path;
  bool include_trace = false;
  bool include_timing = false;
};

inline int run_optimize(const OptimizeFlags& flags, std::ostream& out, std::ostream& err) {
  Workspace ws;
  detail::LoadedInput input = detail::load_input(flags.input_path, flags.inline_expr, ws);
  if (input.poly.is_zero()) throw CLI::ValidationError("cannot optimize the zero polynomial");

  // resultants respond to the leading part of the order, general inputs
  // to the trailing part; --direction overrides the family default
  const Direction direction = !flags.direction_text.empty()
                                  ? detail::parse_direction(flags.direction_text)
                                  : (input.family == "resultant" ? Direction::Front
                                                                 : Direction::Back);

  const auto t0 = std::chrono::steady_clock::now();
  VariableOrder order;
  std::optional<SearchResult> search;
  if (flags.method == "occurrence") {
    order = occurrence_order(input.poly);
  } else if (flags.method == "given-order") {
    if (flags.order_csv.empty())
      throw CLI::ValidationError("--method given-order requires --order");
    for (const std::string& name : detail::split_list(flags.order_csv)) {
      auto id = ws.find(name);
      if (!id) throw CLI::ValidationError("--order names unknown variable '" + name + "'");
      order.push_back(*id);
    }
  } else if (flags.method == "mcts") {
    MctsConfig cfg;
    cfg.expansions = flags.mcts_n;
    cfg.cp = std::stod(flags.cp_text);
    cfg.direction = direction;
    cfg.seed = flags.seed;
    search = mcts_optimize(input.poly, cfg);
    order = search->best_order;
  } else if (flags.method == "exhaustive") {
    search = exhaustive_search(input.poly);
    order = search->best_order;
  } else if (flags.method == "random") {
    search = random_order_search(input.poly, flags.samples, flags.seed).result;
    order = search->best_order;
  } else {
    throw CLI::ValidationError("unknown --method '" + flags.method + "'");
  }

  ExprDag dag = horner_transform(input.poly, order);
  InstructionSeq code = cse(dag);
  const auto t1 = std::chrono::steady_clock::now();

  StatsReport report;
  report.input_name = input.name;
  report.method = flags.method;
  report.naive = naive_op_count(input.poly);
  report.horner = tree_op_count(dag);
  report.cse = instruction_count(code);
  for (VarId v : order) report.order.push_back(ws.name(v));
  report.seed = flags.seed;
  if (flags.method == "mcts") {
    report.mcts_n = flags.mcts_n;
    report.cp_text = flags.cp_text;
    report.direction = to_string(direction);
  }
  if (flags.method == "random") report.samples = flags.samples;
  report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  report.include_timing = flags.include_timing;
  if (search && flags.include_trace) report.trace = &search->trace;

  auto config_comment = [&](const std::string& prefix) {
    std::string line = prefix + " polyopt optimize method=" + flags.method;
    if (flags.method == "mcts")
      line += " n=" + std::to_string(flags.mcts_n) + " cp=" + flags.cp_text +
              " direction=" + to_string(direction);
    if (flags.method == "random") line += " samples=" + std::to_string(flags.samples);
    line += " seed=" + std::to_string(flags.seed) + " input=" + input.name + "\n";
    return line;
  };

  if (flags.format == "json") {
    std::string tac = emit_tac(code, ws);
    std::istringstream lines(tac);
    std::string line;
    while (std::getline(lines, line)) report.code_lines.push_back(line);
    detail::write_output(flags.out_path, emit_stats(report), out);
  } else if (flags.format == "tac") {
    detail::write_output(flags.out_path, config_comment("#") + emit_tac(code, ws), out);
  } else if (flags.format == "c") {
    detail::write_output(flags.out_path,
                         config_comment("//") + emit_c_like(code, ws, "evaluate_poly"), out);
  } else {
    throw CLI::ValidationError("unknown --format '" + flags.format + "'");
  }
  if (flags.include_timing)
    err << "wall_time_s=" << report.wall_time_s << "\n";
  return kExitOk;
}

struct CountFlags {
  std::string input_path;
  std::string inline_expr;
  bool breakdown = false;
  std::string out_path;
};

inline int run_count(const CountFlags& flags, std::ostream& out, std::ostream&) {
  Workspace ws;
  detail::LoadedInput input = detail::load_input(flags.input_path, flags.inline_expr, ws);
  const OpCount naive = naive_op_count(input.poly);
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["input"] = input.name;
  doc["naive"] = {{"adds", naive.adds}, {"muls", naive.muls}, {"total", naive.total()}};
  doc["terms"] = input.poly.term_count();
  if (flags.breakdown) {
    nlohmann::json rows = nlohmann::json::array();
    const auto muls = per_term_mul_counts(input.poly);
    for (std::size_t i = 0; i < input.poly.term_count(); ++i) {
      Polynomial single = Polynomial::from_terms({input.poly.terms()[i]});
      rows.push_back({{"term", to_string(single, ws)}, {"muls", muls[i]}});
    }
    doc["term_breakdown"] = rows;
  }
  detail::write_output(flags.out_path, doc.dump(2) + "\n", out);
  return kExitOk;
}

struct SweepFlags {
  std::string input_path;
  std::string inline_expr;
  std::string cp_csv = "1.0";
  std::string n_csv = "1000";
  std::int64_t seeds = 1;
  std::string direction_text;
  std::string out_path;
};

inline int run_sweep(const SweepFlags& flags, std::ostream& out, std::ostream&) {
  Workspace ws;
  detail::LoadedInput input = detail::load_input(flags.input_path, flags.inline_expr, ws);
  if (input.poly.is_zero()) throw CLI::ValidationError("cannot optimize the zero polynomial");
  const Direction direction = !flags.direction_text.empty()
                                  ? detail::parse_direction(flags.direction_text)
                                  : (input.family == "resultant" ? Direction::Front
                                                                 : Direction::Back);
  const std::vector<std::string> cps = detail::split_list(flags.cp_csv);
  const std::vector<std::string> ns = detail::split_list(flags.n_csv);
  if (cps.empty() || ns.empty() || flags.seeds < 1)
    throw CLI::ValidationError("sweep grid must be nonempty");

  // rows in fixed grid order: cp (list order), then N, then seed
  std::string csv = sweep_csv_header();
  for (const std::string& cp_text : cps) {
    const double cp = std::stod(cp_text);
    for (const std::string& n_text : ns) {
      const std::int64_t n = std::stoll(n_text);
      for (std::int64_t seed = 0; seed < flags.seeds; ++seed) {
        MctsConfig cfg;
        cfg.expansions = n;
        cfg.cp = cp;
        cfg.direction = direction;
        cfg.seed = static_cast<std::uint64_t>(seed);
        const SearchResult result = mcts_optimize(input.poly, cfg);
        csv += sweep_csv_row(cp_text, n, static_cast<std::uint64_t>(seed),
                             result.best_cost.total());
      }
    }
  }
  detail::write_output(flags.out_path, csv, out);
  return kExitOk;
}

struct GenerateFlags {
  std::string kind;
  int m = 1, n = 1;
  int vars = 4, terms = 10, max_degree = 6, pool = 0;
  std::uint64_t seed = 0;
  std::string cache_dir;
  std::string out_path;
};

inline int run_generate(const GenerateFlags& flags, std::ostream& out, std::ostream& err) {
  Workspace ws;
  if (flags.kind == "resultant") {
    if (flags.m < 1 || flags.n < 1)
      throw CLI::ValidationError("resultant degrees must be >= 1");
    const std::filesystem::path cache = detail::cache_dir_from(flags.cache_dir);
    Polynomial p = resultant_cached(flags.m, flags.n, ws, cache);
    if (flags.out_path.empty()) {
      out << "# family: resultant\nvars:";
      for (VarId v : variables_of(p)) out << ' ' << ws.name(v);
      out << "\n" << to_string(p, ws) << "\n";
    } else {
      write_polynomial_file(flags.out_path, p, ws, "resultant");
      err << "wrote " << flags.out_path << " (" << p.term_count() << " terms, "
          << variables_of(p).size() << " variables)\n";
    }
    return kExitOk;
  }
  if (flags.kind == "structured") {
    StructuredRandomParams params;
    params.num_vars = flags.vars;
    params.num_terms = flags.terms;
    params.max_degree = flags.max_degree;
    params.seed = flags.seed;
    params.pool_size = flags.pool;
    Polynomial p = structured_random(params, ws);
    if (flags.out_path.empty()) {
      out << "vars:";
      for (VarId v : variables_of(p)) out << ' ' << ws.name(v);
      out << "\n" << to_string(p, ws) << "\n";
    } else {
      write_polynomial_file(flags.out_path, p, ws);
      err << "wrote " << flags.out_path << " (" << p.term_count() << " terms)\n";
    }
    return kExitOk;
  }
  throw CLI::ValidationError("generate kind must be 'resultant' or 'structured'");
}

/// Entry point; args exclude the program name. Writes results to `out`,
/// diagnostics to `err`, and returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"polyopt: multivariate Horner scheme optimizer with MCTS variable ordering"};
  app.require_subcommand(1);

  OptimizeFlags optimize;
  CLI::App* opt = app.add_subcommand("optimize", "optimize a polynomial and emit code + stats");
  opt->add_option("input", optimize.input_path, "polynomial file");
  opt->add_option("--expr", optimize.inline_expr, "inline polynomial text");
  opt->add_option("--method", optimize.method,
                  "occurrence|random|mcts|exhaustive|given-order (default mcts)");
  opt->add_option("--order", optimize.order_csv, "comma-separated variable order (given-order)");
  opt->add_option("--mcts-n", optimize.mcts_n, "MCTS tree expansions (default 1000)");
  opt->add_option("--cp", optimize.cp_text, "UCT exploration constant (default 1.0)");
  opt->add_option("--direction", optimize.direction_text,
                  "front|back (default: front for resultant files, back otherwise)");
  opt->add_option("--seed", optimize.seed, "random seed (default 0)");
  opt->add_option("--samples", optimize.samples, "samples for --method random (default 1000)");
  opt->add_option("--format", optimize.format, "tac|c|json (default json)");
  opt->add_option("--out", optimize.out_path, "output file (default stdout)");
  opt->add_flag("--trace", optimize.include_trace, "embed the per-expansion trace (json)");
  opt->add_flag("--timing", optimize.include_timing, "include wall time (non-reproducible)");

  CountFlags count;
  CLI::App* cnt = app.add_subcommand("count", "count naive operations");
  cnt->add_option("input", count.input_path, "polynomial file");
  cnt->add_option("--expr", count.inline_expr, "inline polynomial text");
  cnt->add_option("--out", count.out_path, "output file (default stdout)");
  cnt->add_flag("--breakdown", count.breakdown, "per-term multiplication counts");

  SweepFlags sweep;
  CLI::App* swp = app.add_subcommand("sweep", "grid of MCTS runs, one CSV row per (cp, N, seed)");
  swp->add_option("input", sweep.input_path, "polynomial file");
  swp->add_option("--expr", sweep.inline_expr, "inline polynomial text");
  swp->add_option("--sweep-cp", sweep.cp_csv, "comma-separated cp values");
  swp->add_option("--sweep-n", sweep.n_csv, "comma-separated expansion counts");
  swp->add_option("--seeds", sweep.seeds, "seeds per cell, 0..k-1 (default 1)");
  swp->add_option("--direction", sweep.direction_text, "front|back");
  swp->add_option("--out", sweep.out_path, "output CSV file (default stdout)");

  GenerateFlags generate;
  CLI::App* gen = app.add_subcommand("generate", "generate benchmark polynomials");
  gen->add_option("kind", generate.kind, "resultant|structured")->required();
  gen->add_option("m", generate.m, "resultant: degree of a(x)");
  gen->add_option("n", generate.n, "resultant: degree of b(x)");
  gen->add_option("--vars", generate.vars, "structured: number of variables");
  gen->add_option("--terms", generate.terms, "structured: number of terms");
  gen->add_option("--max-degree", generate.max_degree, "structured: max term degree");
  gen->add_option("--pool", generate.pool, "structured: shared factor pool size (0 = auto)");
  gen->add_option("--seed", generate.seed, "structured: random seed");
  gen->add_option("--cache-dir", generate.cache_dir,
                  "cache directory (default $POLYOPT_CACHE_DIR or .polyopt-cache)");
  gen->add_option("--out", generate.out_path, "output file (default stdout)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (opt->parsed()) return run_optimize(optimize, out, err);
    if (cnt->parsed()) return run_count(count, out, err);
    if (swp->parsed()) return run_sweep(sweep, out, err);
    if (gen->parsed()) return run_generate(generate, out, err);
    err << app.help();
    return kExitUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace polyopt::cli
