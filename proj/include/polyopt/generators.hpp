#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyopt/polynomial.hpp"
#include "polyopt/rng.hpp"
#include "polyopt/sylvester.hpp"

namespace polyopt {

// ---------------------------------------------------------------------------
// Polynomial text files
// ---------------------------------------------------------------------------

/// File layout:
///   # free-form comments; "# family: <name>" is recognized as metadata
///   vars: x y z
///   <polynomial expression, may span lines>
/// The `vars:` line pins variable interning order so that ids (and
/// everything derived from id tie-breaking) are identical no matter in
/// which order the expression mentions the variables. Plain files that
/// start directly with the expression are accepted too; ids then follow
/// first occurrence in the text.
struct PolyFile {
  Polynomial poly;
  std::string family;
};

inline PolyFile read_polynomial_text(const std::string& text, Workspace& ws) {
  PolyFile out;
  std::istringstream in(text);
  std::string line, expr;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      const std::string marker = "family:";
      std::size_t pos = line.find(marker);
      if (pos != std::string::npos) {
        std::size_t v = line.find_first_not_of(" \t", pos + marker.size());
        if (v != std::string::npos) {
          std::size_t end = line.find_last_not_of(" \t\r");
          out.family = line.substr(v, end - v + 1);
        }
      }
      continue;
    }
    if (line.compare(start, 5, "vars:") == 0) {
      std::istringstream names(line.substr(start + 5));
      std::string name;
      while (names >> name) ws.intern(name);
      continue;
    }
    expr += line;
    expr += '\n';
  }
  out.poly = parse_polynomial(expr, ws);
  return out;
}

inline PolyFile read_polynomial_file(const std::filesystem::path& path, Workspace& ws) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polynomial file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_polynomial_text(buffer.str(), ws);
}

inline void write_polynomial_file(const std::filesystem::path& path, const Polynomial& p,
                                  const Workspace& ws, const std::string& family = "") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write polynomial file: " + path.string());
  if (!family.empty()) out << "# family: " << family << "\n";
  out << "vars:";
  for (VarId v : variables_of(p)) out << ' ' << ws.name(v);
  out << "\n" << to_string(p, ws) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Cache directory for generated polynomials: $POLYOPT_CACHE_DIR if set,
/// else ".polyopt-cache" under the current directory.
inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("POLYOPT_CACHE_DIR"); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return std::filesystem::path(".polyopt-cache");
}

/// Resultant with a disk cache (`res_<m>_<n>.poly`); generation is slow
/// enough for the large instances that sweeps want the cached file.
inline Polynomial resultant_cached(int m, int n, Workspace& ws,
                                   const std::filesystem::path& cache_dir,
                                   const ResultantOptions& options = {}) {
  const std::filesystem::path file =
      cache_dir / ("res_" + std::to_string(m) + "_" + std::to_string(n) + ".poly");
  if (std::filesystem::exists(file)) return read_polynomial_file(file, ws).poly;
  Polynomial p = resultant(m, n, ws, options);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (!ec) write_polynomial_file(file, p, ws, "resultant");
  return p;
}

// ---------------------------------------------------------------------------
// Structured random surrogates
// ---------------------------------------------------------------------------

struct StructuredRandomParams {
  int num_vars = 4;
  int num_terms = 10;
  int max_degree = 6;
  std::uint64_t seed = 0;
  int pool_size = 0;  // 0: derived from num_terms
};

/// Random polynomial with deliberately repeated substructure: a pool of
/// monomial factors is drawn once and every term is a pool factor times a
/// fresh random monomial, so subexpressions repeat across terms the way
/// they do in structured real-world inputs. Deterministic per seed.
inline Polynomial structured_random(const StructuredRandomParams& params, Workspace& ws) {
  if (params.num_vars < 1 || params.num_terms < 1 || params.max_degree < 1)
    throw std::invalid_argument("structured_random parameters must be positive");
  std::vector<VarId> vars;
  for (int i = 0; i < params.num_vars; ++i) vars.push_back(ws.intern("v" + std::to_string(i)));

  Rng rng(params.seed);
  const int pool_size = params.pool_size > 0
                            ? params.pool_size
                            : std::max(1, std::min(8, params.num_terms / 3));
  const int factor_degree_max = std::max(1, params.max_degree / 2);

  auto random_monomial = [&](int degree) {
    std::vector<std::int32_t> exps(static_cast<std::size_t>(params.num_vars), 0);
    for (int k = 0; k < degree; ++k)
      exps[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(params.num_vars)))] += 1;
    std::vector<std::pair<VarId, std::int32_t>> mono;
    for (int v = 0; v < params.num_vars; ++v)
      if (exps[static_cast<std::size_t>(v)] > 0)
        mono.emplace_back(vars[static_cast<std::size_t>(v)], exps[static_cast<std::size_t>(v)]);
    return mono;
  };

  std::vector<std::vector<std::pair<VarId, std::int32_t>>> pool;
  std::vector<int> pool_degrees;
  for (int i = 0; i < pool_size; ++i) {
    const int deg = static_cast<int>(rng.between(1, factor_degree_max));
    pool.push_back(random_monomial(deg));
    pool_degrees.push_back(deg);
  }

  std::vector<Term> terms;
  std::vector<std::vector<std::pair<VarId, std::int32_t>>> seen;
  const int max_attempts = 64 * params.num_terms;
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(terms.size()) < params.num_terms;
       ++attempt) {
    const std::size_t pick = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(pool_size)));
    const int rest = params.max_degree - pool_degrees[pick];
    const int extra = rest > 0 ? static_cast<int>(rng.between(0, rest)) : 0;

    Term term;
    term.exponents = pool[pick];
    for (const auto& [v, e] : random_monomial(extra)) term.exponents.emplace_back(v, e);
    std::int64_t coeff = rng.between(1, 9);
    if (rng.below(2) == 1) coeff = -coeff;
    term.coeff = coeff;

    // canonicalize the monomial to test distinctness
    Polynomial single = Polynomial::from_terms({term});
    if (single.is_zero()) continue;
    const auto& mono = single.terms()[0].exponents;
    bool duplicate = false;
    for (const auto& m : seen) duplicate = duplicate || m == mono;
    if (duplicate) continue;
    seen.push_back(mono);
    terms.push_back(single.terms()[0]);
  }
  return Polynomial::from_terms(std::move(terms));
}

}  // namespace polyopt
