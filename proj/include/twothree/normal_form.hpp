#pragma once

#include "twothree/int_matrix.hpp"
#include "twothree/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace twothree {

/// U * A * V = D with U, V unimodular and D diagonal-rectangular,
/// d_1 | d_2 | ... | d_r, all nonnegative, trailing entries zero.
struct SNFResult {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d(std::min(D.rows(), D.cols()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = D(i, i);
    return d;
  }
  /// Number of nonzero diagonal entries.
  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& d : diagonal())
      if (d != 0) ++r;
    return r;
  }
};

namespace detail {

// Smallest nonzero |entry| in the trailing block [t, rows) x [t, cols).
inline bool find_min_pivot(const IntMatrix& d, std::size_t t, std::size_t& pi,
                           std::size_t& pj) {
  bool found = false;
  Integer best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      const Integer& x = d(i, j);
      if (x == 0) continue;
      Integer ax = abs(x);
      if (!found || ax < best) {
        best = ax;
        pi = i;
        pj = j;
        found = true;
        if (best == 1) return true;
      }
    }
  return found;
}

}  // namespace detail

/// Smith normal form by iterative row/column reduction, pivoting on the
/// smallest nonzero entry of the remaining block.
inline SNFResult smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a;
  IntMatrix u = IntMatrix::identity(m);
  IntMatrix v = IntMatrix::identity(n);
  const std::size_t steps = std::min(m, n);

  for (std::size_t t = 0; t < steps; ++t) {
    bool block_zero = false;
    for (;;) {
      std::size_t pi = 0, pj = 0;
      if (!detail::find_min_pivot(d, t, pi, pj)) {
        block_zero = true;
        break;
      }
      d.swap_rows(t, pi);
      u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool cleared = true;
      const Integer pivot = d(t, t);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        Integer q = d(i, t) / pivot;
        d.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) cleared = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        Integer q = d(t, j) / pivot;
        d.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) cleared = false;
      }
      if (!cleared) continue;

      // Row and column are clear; enforce divisibility on the rest.
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % pivot != 0) {
            d.add_row_multiple(t, i, 1);
            u.add_row_multiple(t, i, 1);
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (block_zero) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(d), std::move(v)};
}

/// Row-style Hermite normal form: U * A = H, U unimodular, pivots positive,
/// entries above each pivot reduced into [0, pivot), zero rows last.
struct HNFResult {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};

inline HNFResult hermite_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      std::size_t best_row = m;
      Integer best;
      for (std::size_t i = r; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Integer x = abs(h(i, c));
        if (best_row == m || x < best) {
          best = x;
          best_row = i;
        }
      }
      if (best_row == m) break;
      h.swap_rows(r, best_row);
      u.swap_rows(r, best_row);
      bool cleared = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Integer q = h(i, c) / h(r, c);
        h.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (h(i, c) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      h.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  return {std::move(h), std::move(u), r};
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && m(s, k) == 0) ++s;
      if (s == n) return 0;
      m.swap_rows(k, s);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& a) {
  return a.rows() == a.cols() && abs(determinant(a)) == 1;
}

/// Some integer x with A x = b, or nullopt when none exists.
inline std::optional<std::vector<Integer>> solve_integer(const SNFResult& snf,
                                                         const std::vector<Integer>& b) {
  const std::size_t m = snf.D.rows(), n = snf.D.cols();
  if (b.size() != m) throw std::invalid_argument("right-hand side length mismatch");
  std::vector<Integer> c = snf.U * b;
  std::vector<Integer> y(n);
  for (std::size_t i = 0; i < m; ++i) {
    const Integer di = i < n ? snf.D(i, i) : Integer(0);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    if (c[i] % di != 0) return std::nullopt;
    y[i] = c[i] / di;
  }
  return snf.V * y;
}

inline std::optional<std::vector<Integer>> solve_integer(const IntMatrix& a,
                                                         const std::vector<Integer>& b) {
  return solve_integer(smith_normal_form(a), b);
}

/// Integer X with A X = B column by column, or nullopt.
inline std::optional<IntMatrix> solve_integer(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("system row mismatch");
  SNFResult snf = smith_normal_form(a);
  IntMatrix x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto sol = solve_integer(snf, b.col(j));
    if (!sol) return std::nullopt;
    for (std::size_t i = 0; i < a.cols(); ++i) x(i, j) = (*sol)[i];
  }
  return x;
}

/// Basis of the integer kernel {x : A x = 0}, as columns.
inline IntMatrix integer_nullspace(const IntMatrix& a) {
  SNFResult snf = smith_normal_form(a);
  const std::size_t r = snf.rank();
  return snf.V.col_block(r, a.cols() - r);
}

}  // namespace twothree
