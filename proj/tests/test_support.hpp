#pragma once

// Shared generators for property-style tests. Everything is seeded and
// deterministic so failures reproduce.

#include <map>
#include <string>
#include <vector>

#include "polyopt/polynomial.hpp"
#include "polyopt/rng.hpp"

namespace polyopt::testing {

inline std::vector<VarId> make_vars(Workspace& ws, int count) {
  std::vector<VarId> vars;
  for (int i = 0; i < count; ++i) vars.push_back(ws.intern("x" + std::to_string(i)));
  return vars;
}

/// Random canonical polynomial over the given variables. Coefficients in
/// [-9, 9] \ {0}; exponents small; duplicate monomials merge, so the
/// term count may come out below max_terms.
inline Polynomial random_polynomial(Rng& rng, const std::vector<VarId>& vars, int max_terms,
                                    int max_exp = 3) {
  const int terms = static_cast<int>(rng.between(1, max_terms));
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Term term;
    std::int64_t c = rng.between(1, 9);
    if (rng.below(2) == 1) c = -c;
    term.coeff = c;
    for (VarId v : vars) {
      const auto e = static_cast<std::int32_t>(rng.between(0, max_exp));
      if (e > 0) term.exponents.emplace_back(v, e);
    }
    ts.push_back(std::move(term));
  }
  return Polynomial::from_terms(std::move(ts));
}

/// Random rational point covering `vars`; numerators in [-7, 7],
/// denominators in [1, 5].
inline std::map<VarId, Rational> random_point(Rng& rng, const std::vector<VarId>& vars) {
  std::map<VarId, Rational> point;
  for (VarId v : vars)
    point[v] = Rational(rng.between(-7, 7), rng.between(1, 5));
  return point;
}

inline std::vector<VarId> shuffled(Rng& rng, std::vector<VarId> vars) {
  rng.shuffle(vars);
  return vars;
}

}  // namespace polyopt::testing
