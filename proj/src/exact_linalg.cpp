#include "vdw/exact_linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>

#include "vdw/errors.hpp"

namespace vdw {

namespace {

using Rational = boost::multiprecision::cpp_rational;

void divide_by_content(IntVec& row) {
  BigInt g = 0;
  for (const auto& e : row) {
    if (e != 0) g = gcd(g, abs(e));
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& e : row) e /= g;
}

}  // namespace

IntVec to_big(std::span<const std::int64_t> v) { return IntVec(v.begin(), v.end()); }

std::vector<std::int64_t> to_int64(const IntVec& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (e > std::numeric_limits<std::int64_t>::max() || e < std::numeric_limits<std::int64_t>::min())
      throw Error("integer entry does not fit in 64 bits");
    out.push_back(static_cast<std::int64_t>(e));
  }
  return out;
}

BigInt sup_norm(const IntVec& v) {
  BigInt best = 0;
  for (const auto& e : v)
    if (abs(e) > best) best = abs(e);
  return best;
}

bool is_zero(const IntVec& v) {
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

std::size_t rank(IntMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const BigInt a = rows[r][c];
      const BigInt b = rows[i][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] = a * rows[i][k] - b * rows[r][k];
      divide_by_content(rows[i]);
    }
    ++r;
  }
  return r;
}

std::vector<std::size_t> pivot_columns(const IntMatrix& rows) {
  const std::size_t m = rows.size();
  if (m == 0) return {};
  const std::size_t cols = rows.front().size();
  std::vector<std::size_t> chosen;
  // Greedily keep a column when it raises the rank of the chosen column set.
  IntMatrix transposed;
  for (std::size_t c = 0; c < cols && chosen.size() < m; ++c) {
    IntVec column(m);
    for (std::size_t i = 0; i < m; ++i) column[i] = rows[i][c];
    transposed.push_back(column);
    if (rank(transposed) > chosen.size()) {
      chosen.push_back(c);
    } else {
      transposed.pop_back();
    }
  }
  if (chosen.size() != m) throw Error("pivot_columns: matrix is not of full row rank");
  return chosen;
}

BigInt determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;  // exact (Bareiss)
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

IntMatrix adjugate(const IntMatrix& a) {
  const std::size_t n = a.size();
  IntMatrix adj(n, IntVec(n));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Cofactor C_ij from the minor deleting row i and column j; adj = C^T.
      IntMatrix minor;
      minor.reserve(n - 1);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        IntVec row;
        row.reserve(n - 1);
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      BigInt cof = determinant(std::move(minor));
      if ((i + j) % 2) cof = -cof;
      adj[j][i] = cof;
    }
  }
  return adj;
}

IntMatrix rational_kernel(const IntMatrix& rows, std::size_t cols) {
  std::vector<std::vector<Rational>> m;
  for (const auto& row : rows) m.emplace_back(row.begin(), row.end());

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    const Rational inv = 1 / m[r][c];
    for (auto& e : m[r]) e *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }

  IntMatrix kernel;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> y(cols, Rational(0));
    y[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) y[pivots[i]] = -m[i][free];
    BigInt den = 1;
    for (const auto& e : y) den = lcm(den, denominator(e));
    IntVec out(cols);
    for (std::size_t k = 0; k < cols; ++k) out[k] = numerator(y[k]) * (den / denominator(y[k]));
    divide_by_content(out);
    kernel.push_back(std::move(out));
  }
  return kernel;
}

}  // namespace vdw
