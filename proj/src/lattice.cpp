#include "vdw/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vdw/errors.hpp"

namespace vdw {

namespace {

BigInt round_div(const BigInt& a, const BigInt& b) {
  // Nearest integer to a/b for b > 0, ties toward +infinity.
  BigInt twice = 2 * a + b;
  BigInt den = 2 * b;
  BigInt q = twice / den;
  if (twice % den != 0 && twice < 0) q -= 1;  // floor for negatives
  return q;
}

// Row-style Hermite normal form kept upper triangular with positive pivots.
class HermiteAccumulator {
 public:
  explicit HermiteAccumulator(std::size_t m) : rows_(m) {}

  void insert(IntVec v) {
    const std::size_t m = rows_.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (v[i] == 0) continue;
      if (rows_[i].empty()) {
        if (v[i] < 0)
          for (auto& e : v) e = -e;
        rows_[i] = std::move(v);
        reduce_row(i);
        return;
      }
      IntVec& h = rows_[i];
      const BigInt hp = h[i];
      const BigInt vp = v[i];
      BigInt s, t;
      const BigInt g = extended_gcd(hp, vp, s, t);
      IntVec combined(m), rest(m);
      for (std::size_t k = 0; k < m; ++k) {
        combined[k] = s * h[k] + t * v[k];
        rest[k] = (vp / g) * h[k] - (hp / g) * v[k];
      }
      if (combined[i] < 0)
        for (auto& e : combined) e = -e;
      h = std::move(combined);
      reduce_row(i);
      v = std::move(rest);
    }
  }

  bool full() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const IntVec& r) { return !r.empty(); });
  }

  /// Centered size reduction: |row_i[j]| <= row_j[j] / 2 for j > i.
  IntMatrix centered() const {
    IntMatrix out = rows_;
    const std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const BigInt q = round_div(out[i][j], out[j][j]);
        if (q == 0) continue;
        for (std::size_t k = j; k < m; ++k) out[i][k] -= q * out[j][k];
      }
    }
    return out;
  }

 private:
  static BigInt extended_gcd(const BigInt& a, const BigInt& b, BigInt& s, BigInt& t) {
    BigInt old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
      const BigInt q = old_r / r;
      BigInt tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * cur_s;
      old_s = cur_s;
      cur_s = tmp;
      tmp = old_t - q * cur_t;
      old_t = cur_t;
      cur_t = tmp;
    }
    if (old_r < 0) {
      old_r = -old_r;
      old_s = -old_s;
      old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
  }

  // Keep entries right of the pivot in [0, pivot_j) to curb growth.
  void reduce_row(std::size_t i) {
    IntVec& h = rows_[i];
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      if (rows_[j].empty()) continue;
      BigInt q = h[j] / rows_[j][j];
      if (h[j] - q * rows_[j][j] < 0) q -= 1;
      if (q == 0) continue;
      for (std::size_t k = j; k < h.size(); ++k) h[k] -= q * rows_[j][k];
    }
  }

  IntMatrix rows_;
};

std::vector<std::size_t> independent_subset(const IntMatrix& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sup_norm(points[a]) < sup_norm(points[b]);
  });
  const std::size_t D = points.front().size();
  std::vector<std::size_t> chosen;
  IntMatrix basis;
  for (auto idx : order) {
    if (is_zero(points[idx])) continue;
    basis.push_back(points[idx]);
    if (rank(basis) == basis.size()) {
      chosen.push_back(idx);
      if (chosen.size() == D) break;
    } else {
      basis.pop_back();
    }
  }
  return chosen;
}

BigInt factorial(std::size_t m) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

IntMatrix enumerate_bounded_points(const IntMatrix& generators, std::int64_t Q, std::uint64_t cap) {
  if (generators.empty()) throw EmptyInput("enumerate_bounded_points: no generators");
  if (Q < 0) throw Error("enumerate_bounded_points: Q must be nonnegative");
  const std::size_t D = generators.front().size();
  const std::uint64_t side = static_cast<std::uint64_t>(2 * Q + 1);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < D; ++i) {
    if (total > cap / side) throw CapExceeded("enumerate_bounded_points: box exceeds cap");
    total *= side;
  }

  // x lies in the span iff it is orthogonal to every kernel vector of the
  // orthogonal complement, i.e. to every row of ker(generators).
  const IntMatrix kernel = rational_kernel(generators, D);
  std::vector<std::vector<std::int64_t>> normals;
  normals.reserve(kernel.size());
  for (const auto& k : kernel) normals.push_back(to_int64(k));

  IntMatrix out;
  std::vector<std::int64_t> x(D, -Q);
  for (std::uint64_t step = 0; step < total; ++step) {
    bool inside = true;
    for (const auto& n : normals) {
      __int128 dot = 0;
      for (std::size_t i = 0; i < D; ++i) dot += static_cast<__int128>(n[i]) * x[i];
      if (dot != 0) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(to_big(x));
    for (std::size_t i = D; i-- > 0;) {
      if (x[i] < Q) {
        ++x[i];
        break;
      }
      x[i] = -Q;
    }
  }
  return out;
}

LatticeBasis short_basis(const IntMatrix& points, std::int64_t Q) {
  if (points.empty()) throw EmptyInput("short_basis: no points");
  const std::size_t D = points.front().size();
  const std::vector<std::size_t> indep = independent_subset(points);
  if (indep.empty()) throw EmptyInput("short_basis: points span the zero lattice");
  const std::size_t m = indep.size();

  BigInt max_point_norm = 0;
  for (const auto& p : points) max_point_norm = std::max(max_point_norm, sup_norm(p));
  if (Q <= 0) Q = static_cast<std::int64_t>(max_point_norm);

  IntMatrix frame;  // independent points x_1..x_m
  for (auto idx : indep) frame.push_back(points[idx]);
  const auto cols = pivot_columns(frame);

  // Coordinates of p in the frame: solve frame^T c = p restricted to cols.
  // With A[k][j] = frame[j][cols[k]], c = adj(A) p_cols / det(A).
  IntMatrix A(m, IntVec(m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j) A[k][j] = frame[j][cols[k]];
  const BigInt det = determinant(A);
  const IntMatrix adj = adjugate(A);

  HermiteAccumulator hnf(m);
  for (const auto& p : points) {
    IntVec scaled(m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) scaled[j] += adj[j][k] * p[cols[k]];
    hnf.insert(std::move(scaled));
  }
  if (!hnf.full()) throw Error("short_basis: internal error, lattice rank below frame rank");
  const IntMatrix coords = hnf.centered();

  LatticeBasis basis;
  basis.dimension = m;
  basis.source_Q = Q;
  for (const auto& row : coords) {
    IntVec w(D);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t d = 0; d < D; ++d) w[d] += row[j] * frame[j][d];
    for (auto& e : w) {
      if (e % det != 0) throw Error("short_basis: internal error, non-integral basis vector");
      e /= det;
    }
    basis.vectors.push_back(std::move(w));
  }

  // Greedy unimodular sweeps: w_i <- w_i -/+ w_j whenever that shrinks |w_i|.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        for (int sign : {1, -1}) {
          IntVec candidate = basis.vectors[i];
          for (std::size_t d = 0; d < D; ++d) candidate[d] -= sign * basis.vectors[j][d];
          if (sup_norm(candidate) < sup_norm(basis.vectors[i])) {
            basis.vectors[i] = std::move(candidate);
            changed = true;
          }
        }
      }
    }
  }

  for (const auto& w : basis.vectors) basis.max_norm = std::max(basis.max_norm, sup_norm(w));
  basis.norm_bound = BigInt(static_cast<std::int64_t>(D)) * Q;
  basis.norm_certified = basis.max_norm <= basis.norm_bound;
  BigInt frame_norm = 0;
  for (const auto& x : frame) frame_norm = std::max(frame_norm, sup_norm(x));
  basis.half_m_bound_met = 2 * basis.max_norm <= BigInt(static_cast<std::int64_t>(m)) * frame_norm;
  return basis;
}

BasisExpression express_in_basis(const IntVec& x, const LatticeBasis& basis) {
  const std::size_t m = basis.dimension;
  const std::size_t D = x.size();
  if (m == 0 || basis.vectors.size() != m) throw Error("express_in_basis: empty basis");
  if (basis.vectors.front().size() != D) throw Error("express_in_basis: dimension mismatch");

  const auto cols = pivot_columns(basis.vectors);
  IntMatrix B(m, IntVec(m));  // B[k][i] = w_i[cols[k]], so B n = x_cols
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) B[k][i] = basis.vectors[i][cols[k]];
  const BigInt det = determinant(B);
  const IntMatrix adj = adjugate(B);

  BasisExpression out;
  out.coefficients.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    BigInt acc = 0;
    for (std::size_t k = 0; k < m; ++k) acc += adj[i][k] * x[cols[k]];
    if (acc % det != 0) throw NotInLattice("express_in_basis: point is not an integer combination");
    out.coefficients[i] = acc / det;
  }
  for (std::size_t d = 0; d < D; ++d) {
    BigInt rebuilt = 0;
    for (std::size_t i = 0; i < m; ++i) rebuilt += out.coefficients[i] * basis.vectors[i][d];
    if (rebuilt != x[d]) throw NotInLattice("express_in_basis: point lies outside the span");
  }

  const BigInt DQ = BigInt(static_cast<std::int64_t>(D)) * basis.source_Q;
  out.bound = factorial(m) * pow(DQ, static_cast<unsigned>(m));
  out.bound_applies = sup_norm(x) <= basis.source_Q;
  out.within_bound = std::all_of(out.coefficients.begin(), out.coefficients.end(),
                                 [&](const BigInt& n) { return abs(n) <= out.bound; });
  return out;
}

}  // namespace vdw
