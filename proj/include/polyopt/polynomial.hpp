#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyopt/errors.hpp"
#include "polyopt/numeric.hpp"
#include "polyopt/op_count.hpp"
#include "polyopt/variable.hpp"

namespace polyopt {

/// One monomial: nonzero integer coefficient times a product of variable
/// powers. Exponents are stored sparse, sorted by variable id, all >= 1.
struct Term {
  BigInt coeff;
  std::vector<std::pair<VarId, std::int32_t>> exponents;

  std::int64_t total_degree() const {
    std::int64_t d = 0;
    for (const auto& [v, e] : exponents) d += e;
    return d;
  }

  std::int32_t exponent_of(VarId v) const {
    for (const auto& [var, e] : exponents)
      if (var == v) return e;
    return 0;
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.coeff == b.coeff && a.exponents == b.exponents;
  }
};

/// Orders monomials for the canonical term layout: lexicographic on the
/// exponent vectors, lower variable ids most significant, higher exponent
/// first. The constant monomial sorts last.
inline int compare_monomials(const Term& a, const Term& b) {
  std::size_t i = 0, j = 0;
  while (i < a.exponents.size() && j < b.exponents.size()) {
    const auto& [va, ea] = a.exponents[i];
    const auto& [vb, eb] = b.exponents[j];
    if (va != vb) return va < vb ? 1 : -1;  // positive power at the smaller id wins
    if (ea != eb) return ea > eb ? 1 : -1;
    ++i, ++j;
  }
  if (i < a.exponents.size()) return 1;
  if (j < b.exponents.size()) return -1;
  return 0;
}

/// Canonical sparse multivariate polynomial: terms sorted by monomial
/// order, like terms merged, no zero coefficients and no zero exponents.
/// Immutable after construction; evaluation is order-independent.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(BigInt value) {
    std::vector<Term> ts;
    if (value != 0) ts.push_back(Term{std::move(value), {}});
    return Polynomial(std::move(ts), Canonical{});
  }

  static Polynomial variable(VarId v) {
    return Polynomial({Term{BigInt(1), {{v, 1}}}}, Canonical{});
  }

  /// Canonicalizes arbitrary terms: sorts exponent maps and terms, merges
  /// like terms, drops zeros.
  static Polynomial from_terms(std::vector<Term> terms) {
    for (auto& t : terms) {
      auto& e = t.exponents;
      std::sort(e.begin(), e.end());
      // merge duplicated variables within one monomial
      std::size_t out = 0;
      for (std::size_t i = 0; i < e.size();) {
        VarId v = e[i].first;
        std::int64_t sum = 0;
        while (i < e.size() && e[i].first == v) sum += e[i++].second;
        if (sum < 0) throw std::invalid_argument("negative exponent");
        if (sum > 0) e[out++] = {v, static_cast<std::int32_t>(sum)};
      }
      e.resize(out);
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare_monomials(a, b) > 0; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (auto& t : terms) {
      if (!merged.empty() && compare_monomials(merged.back(), t) == 0)
        merged.back().coeff += t.coeff;
      else
        merged.push_back(std::move(t));
      if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
    }
    return Polynomial(std::move(merged), Canonical{});
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponents.empty()); }
  std::size_t term_count() const { return terms_.size(); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  struct Canonical {};
  Polynomial(std::vector<Term> terms, Canonical) : terms_(std::move(terms)) {}

  std::vector<Term> terms_;
};

/// Distinct variables occurring in p, ascending id.
inline std::vector<VarId> variables_of(const Polynomial& p) {
  std::vector<VarId> vars;
  for (const auto& t : p.terms())
    for (const auto& [v, e] : t.exponents) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

// ---------------------------------------------------------------------------
// Arithmetic (what the generators and tests need; no division, no gcd)
// ---------------------------------------------------------------------------

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Term> ts;
  ts.reserve(a.term_count() + b.term_count());
  ts.insert(ts.end(), a.terms().begin(), a.terms().end());
  ts.insert(ts.end(), b.terms().begin(), b.terms().end());
  return Polynomial::from_terms(std::move(ts));
}

inline Polynomial operator-(const Polynomial& p) {
  std::vector<Term> ts = p.terms();
  for (auto& t : ts) t.coeff = -t.coeff;
  return Polynomial::from_terms(std::move(ts));
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

inline Polynomial multiply_by_term(const Polynomial& p, const Term& m) {
  std::vector<Term> ts = p.terms();
  for (auto& t : ts) {
    t.coeff *= m.coeff;
    t.exponents.insert(t.exponents.end(), m.exponents.begin(), m.exponents.end());
  }
  return Polynomial::from_terms(std::move(ts));
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Term> ts;
  ts.reserve(a.term_count() * b.term_count());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      Term t;
      t.coeff = ta.coeff * tb.coeff;
      t.exponents = ta.exponents;
      t.exponents.insert(t.exponents.end(), tb.exponents.begin(), tb.exponents.end());
      ts.push_back(std::move(t));
    }
  return Polynomial::from_terms(std::move(ts));
}

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

/// Parses a sum of signed terms, each a '*'-separated product of integer
/// coefficients and `var` / `var^exp` factors. Whitespace is ignored,
/// parentheses are not part of the grammar, and `*` is mandatory between
/// factors. The result is canonical (like terms merged, zeros dropped).
inline Polynomial parse_polynomial(std::string_view text, Workspace& ws) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto skip_ws = [&] {
    while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
  };
  auto parse_uint = [&](const char* what) {
    std::size_t start = i;
    BigInt value = 0;
    while (i < n && text[i] >= '0' && text[i] <= '9') {
      value = value * 10 + (text[i] - '0');
      ++i;
    }
    if (i == start) throw ParseError(std::string("expected ") + what, i);
    return value;
  };

  std::vector<Term> terms;
  skip_ws();
  if (i == n) throw ParseError("empty polynomial", i);

  bool first = true;
  while (true) {
    skip_ws();
    if (i == n) {
      if (first) throw ParseError("expected term", i);
      break;
    }
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' between terms", i);
    }
    first = false;

    Term term;
    term.coeff = sign;
    bool saw_factor = false;
    while (true) {
      skip_ws();
      if (i < n && text[i] >= '0' && text[i] <= '9') {
        term.coeff *= parse_uint("integer");
        saw_factor = true;
      } else if (i < n && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        std::size_t start = i;
        while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
        VarId var = ws.intern(text.substr(start, i - start));
        std::int64_t exp = 1;
        skip_ws();
        if (i < n && text[i] == '^') {
          ++i;
          skip_ws();
          if (i < n && text[i] == '-') throw ParseError("negative exponent not allowed", i);
          BigInt e = parse_uint("exponent");
          if (e > 1000000) throw ParseError("exponent too large", i);
          exp = static_cast<std::int64_t>(e);
        }
        if (exp > 0) term.exponents.emplace_back(var, static_cast<std::int32_t>(exp));
        saw_factor = true;
      } else {
        throw ParseError("expected coefficient or variable", i);
      }
      skip_ws();
      if (i < n && text[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    if (!saw_factor) throw ParseError("empty term", i);
    terms.push_back(std::move(term));
    skip_ws();
    if (i == n) break;
    if (text[i] != '+' && text[i] != '-')
      throw ParseError("unexpected character '" + std::string(1, text[i]) + "'", i);
  }
  return Polynomial::from_terms(std::move(terms));
}

/// Canonical rendering; parse(to_string(p)) == p.
inline std::string to_string(const Polynomial& p, const Workspace& ws) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = t.coeff < 0;
    BigInt mag = negative ? BigInt(-t.coeff) : t.coeff;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? '-' : '+';
    }
    first = false;
    bool need_star = false;
    if (mag != 1 || t.exponents.empty()) {
      out += mag.str();
      need_star = true;
    }
    for (const auto& [v, e] : t.exponents) {
      if (need_star) out += '*';
      out += ws.name(v);
      if (e > 1) {
        out += '^';
        out += std::to_string(e);
      }
      need_star = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cost and evaluation
// ---------------------------------------------------------------------------

/// Operation count of evaluating p literally, term by term. Signs are
/// folded into coefficients (negation is free), a +/-1 coefficient costs
/// nothing, any other coefficient costs one multiplication, and a monomial
/// of total degree d costs d-1 multiplications.
inline OpCount naive_op_count(const Polynomial& p) {
  OpCount oc;
  if (p.term_count() > 1) oc.adds = static_cast<std::int64_t>(p.term_count()) - 1;
  for (const auto& t : p.terms()) {
    const std::int64_t degree = t.total_degree();
    if (degree >= 1) oc.muls += degree - 1;
    if (!is_unit(t.coeff)) oc.muls += 1;
  }
  return oc;
}

/// Per-term share of naive_op_count, for convention diagnostics.
inline std::vector<std::int64_t> per_term_mul_counts(const Polynomial& p) {
  std::vector<std::int64_t> counts;
  counts.reserve(p.term_count());
  for (const auto& t : p.terms()) {
    const std::int64_t degree = t.total_degree();
    std::int64_t muls = degree >= 1 ? degree - 1 : 0;
    if (!is_unit(t.coeff)) muls += 1;
    counts.push_back(muls);
  }
  return counts;
}

/// Number of terms each variable occurs in (exponent >= 1), keyed by id.
/// Multiplicity within a term does not count.
inline std::map<VarId, std::int64_t> occurrence_counts(const Polynomial& p) {
  std::map<VarId, std::int64_t> counts;
  for (const auto& t : p.terms())
    for (const auto& [v, e] : t.exponents) counts[v] += 1;
  return counts;
}

/// Exact evaluation at a rational point covering all variables of p.
inline Rational evaluate(const Polynomial& p, const std::map<VarId, Rational>& point) {
  Rational sum(0);
  for (const auto& t : p.terms()) {
    Rational prod(t.coeff);
    for (const auto& [v, e] : t.exponents) {
      auto it = point.find(v);
      if (it == point.end()) throw MissingAssignmentError(v);
      prod *= pow_rational(it->second, static_cast<std::uint64_t>(e));
    }
    sum += prod;
  }
  return sum;
}

}  // namespace polyopt
