#include "deltakit/lp.hpp"

#include <optional>

#include "deltakit/error.hpp"

namespace deltakit {

LpResult maximize(const LinearProgram& lp) {
  const std::size_t rows = lp.a.size();
  const std::size_t cols = lp.c.size();
  if (lp.b.size() != rows) throw PreconditionError("lp: right-hand side has wrong length");
  for (std::size_t i = 0; i < rows; ++i) {
    if (lp.a[i].size() != cols) throw PreconditionError("lp: ragged constraint matrix");
    if (lp.b[i] < 0) throw PreconditionError("lp: origin must be feasible");
  }

  // Tableau columns: structural, slack, rhs. Row `rows` holds reduced costs.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<Rational>> t(rows + 1, std::vector<Rational>(width));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = lp.a[i][j];
    t[i][cols + i] = 1;
    t[i][width - 1] = lp.b[i];
    basis[i] = cols + i;
  }
  for (std::size_t j = 0; j < cols; ++j) t[rows][j] = -lp.c[j];

  for (;;) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[rows][j] < 0) {
        entering = j;
        break;
      }
    }
    if (!entering) break;
    const std::size_t e = *entering;

    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][e] <= 0) continue;
      Rational ratio = t[i][width - 1] / t[i][e];
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leaving])) {
        leaving = i;
        best_ratio = std::move(ratio);
      }
    }
    if (!leaving) return LpResult{LpStatus::unbounded, {}, {}};
    const std::size_t r = *leaving;

    const Rational pivot = t[r][e];
    for (auto& v : t[r]) v /= pivot;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == r || t[i][e] == 0) continue;
      const Rational factor = t[i][e];
      for (std::size_t j = 0; j < width; ++j) {
        if (t[r][j] != 0) t[i][j] -= factor * t[r][j];
      }
    }
    basis[r] = e;
  }

  LpResult result;
  result.value = t[rows][width - 1];
  result.x.assign(cols, Rational(0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) result.x[basis[i]] = t[i][width - 1];
  }
  return result;
}

Rational lipschitz_dual_value(const FreeElement& mu) {
  const auto& space = mu.space();
  const std::size_t n = space.size();
  // f_p = plus_p - minus_p for every non-base point p.
  std::vector<std::size_t> column(n, 0);
  std::size_t free_points = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (p != space.base()) column[p] = free_points++;
  }
  const std::size_t cols = 2 * free_points;
  LinearProgram lp;
  lp.c.assign(cols, Rational(0));
  for (const auto& [p, c] : mu.coeffs()) {
    lp.c[2 * column[p]] = c;
    lp.c[2 * column[p] + 1] = -c;
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      // f_p - f_q <= d(p,q)
      std::vector<Rational> row(cols);
      if (p != space.base()) {
        row[2 * column[p]] += 1;
        row[2 * column[p] + 1] -= 1;
      }
      if (q != space.base()) {
        row[2 * column[q]] -= 1;
        row[2 * column[q] + 1] += 1;
      }
      lp.a.push_back(std::move(row));
      lp.b.push_back(space.dist(p, q));
    }
  }
  const LpResult result = maximize(lp);
  if (result.status != LpStatus::optimal) throw Error("Lipschitz dual program is unbounded");
  return result.value;
}

}  // namespace deltakit
