#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyopt/errors.hpp"
#include "polyopt/polynomial.hpp"

namespace polyopt {

/// Dense matrix of polynomial entries (used only for the Sylvester
/// construction, where every entry is a single variable or zero).
struct SymbolicMatrix {
  std::int32_t rows = 0;
  std::int32_t cols = 0;
  std::vector<Polynomial> entries;  // row-major

  const Polynomial& at(std::int32_t r, std::int32_t c) const {
    return entries[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(c)];
  }
  Polynomial& at(std::int32_t r, std::int32_t c) {
    return entries[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(c)];
  }
};

/// Sylvester matrix of two generic univariate polynomials
///   a(x) = a_m x^m + ... + a_0,   b(x) = b_n x^n + ... + b_0
/// over the m+n+2 coefficient variables a_i, b_i (interned in that
/// order): n shifted rows of a-coefficients, then m shifted rows of
/// b-coefficients, size (m+n) x (m+n).
inline SymbolicMatrix sylvester_matrix(int m, int n, Workspace& ws) {
  if (m < 1 || n < 1) throw std::invalid_argument("sylvester_matrix requires degrees >= 1");
  std::vector<VarId> a_vars, b_vars;
  for (int i = 0; i <= m; ++i) a_vars.push_back(ws.intern("a" + std::to_string(i)));
  for (int i = 0; i <= n; ++i) b_vars.push_back(ws.intern("b" + std::to_string(i)));

  const std::int32_t size = static_cast<std::int32_t>(m + n);
  SymbolicMatrix mat;
  mat.rows = mat.cols = size;
  mat.entries.assign(static_cast<std::size_t>(size) * static_cast<std::size_t>(size),
                     Polynomial{});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k)
      mat.at(i, i + k) = Polynomial::variable(a_vars[static_cast<std::size_t>(m - k)]);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k)
      mat.at(n + i, i + k) = Polynomial::variable(b_vars[static_cast<std::size_t>(n - k)]);
  return mat;
}

struct ResultantOptions {
  std::size_t term_cap = 2'000'000;  // per-polynomial growth limit
};

namespace detail {

class DeterminantExpander {
 public:
  DeterminantExpander(const SymbolicMatrix& mat, std::size_t term_cap)
      : mat_(mat), term_cap_(term_cap) {}

  Polynomial run() {
    const std::uint32_t full = mat_.cols >= 32 ? ~0u : (1u << mat_.cols) - 1u;
    return minor_of(full);
  }

 private:
  // Determinant of the lower-right submatrix with the given column set;
  // the row index is implied by how many columns are already consumed.
  Polynomial minor_of(std::uint32_t cols) {
    if (cols == 0) return Polynomial::constant(1);
    auto it = memo_.find(cols);
    if (it != memo_.end()) return it->second;

    const std::int32_t row = mat_.rows - popcount(cols);
    std::vector<Term> acc;
    int position = 0;
    for (std::int32_t c = 0; c < mat_.cols; ++c) {
      if ((cols & (1u << c)) == 0) continue;
      const int sign = position % 2 == 0 ? 1 : -1;
      ++position;
      const Polynomial& entry = mat_.at(row, c);
      if (entry.is_zero()) continue;
      if (entry.term_count() != 1)
        throw std::invalid_argument("determinant expansion expects single-term entries");
      Term factor = entry.terms()[0];
      factor.coeff *= sign;
      const Polynomial sub = minor_of(cols & ~(1u << c));
      for (const Term& t : sub.terms()) {
        Term prod;
        prod.coeff = t.coeff * factor.coeff;
        prod.exponents = t.exponents;
        prod.exponents.insert(prod.exponents.end(), factor.exponents.begin(),
                              factor.exponents.end());
        acc.push_back(std::move(prod));
      }
      if (acc.size() > 4 * term_cap_)
        throw ResourceLimitError("determinant term cap exceeded (" +
                                 std::to_string(term_cap_) + " terms)");
    }
    Polynomial result = Polynomial::from_terms(std::move(acc));
    if (result.term_count() > term_cap_)
      throw ResourceLimitError("determinant term cap exceeded (" + std::to_string(term_cap_) +
                               " terms)");
    memo_.emplace(cols, result);
    return result;
  }

  static int popcount(std::uint32_t v) {
    int count = 0;
    while (v != 0) {
      v &= v - 1;
      ++count;
    }
    return count;
  }

  const SymbolicMatrix& mat_;
  std::size_t term_cap_;
  std::unordered_map<std::uint32_t, Polynomial> memo_;
};

}  // namespace detail

/// The resultant of generic degree-m and degree-n polynomials as an
/// expanded canonical polynomial: the Sylvester determinant, computed by
/// expansion by minors with memoization on the column subset. Exact
/// integer coefficients; throws ResourceLimitError beyond the term cap.
inline Polynomial resultant(int m, int n, Workspace& ws, const ResultantOptions& options = {}) {
  if (m + n > 31) throw std::invalid_argument("resultant: m + n too large");
  const SymbolicMatrix mat = sylvester_matrix(m, n, ws);
  detail::DeterminantExpander expander(mat, options.term_cap);
  return expander.run();
}

}  // namespace polyopt
