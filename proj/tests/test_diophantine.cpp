#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>

#include "vdw/diophantine.hpp"
#include "vdw/errors.hpp"
#include "vdw/rng.hpp"

using namespace vdw;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Vecs = std::vector<std::vector<std::int64_t>>;

namespace {

cpp_int leibniz(const std::vector<std::vector<cpp_int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  cpp_int total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    cpp_int term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Largest r with a nonzero r x r minor.
std::size_t minor_rank(const Vecs& v) {
  if (v.empty()) return 0;
  const std::size_t rows = v.size(), cols = v[0].size();
  for (std::size_t r = std::min(rows, cols); r > 0; --r) {
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(r), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(r), true);
      do {
        std::vector<std::vector<cpp_int>> m;
        for (std::size_t i = 0; i < rows; ++i) {
          if (!rsel[i]) continue;
          m.emplace_back();
          for (std::size_t j = 0; j < cols; ++j)
            if (csel[j]) m.back().push_back(v[i][j]);
        }
        if (leibniz(m) != 0) return r;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

// Gaussian elimination over the rationals.
std::size_t rational_rank(const Vecs& v) {
  if (v.empty()) return 0;
  std::vector<std::vector<cpp_rational>> a;
  for (const auto& row : v) a.emplace_back(row.begin(), row.end());
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a[0].size() && rank < a.size(); ++col) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      const cpp_rational f = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < a[i].size(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

TorusPoint random_theta(std::uint64_t seed, std::size_t D) {
  CounterStream s(seed, StreamTag::kTest);
  TorusPoint t(D);
  for (std::size_t i = 0; i < D; ++i) t[i] = s.next();
  return t;
}

// Residue of n (xi . theta) from 128-bit accumulation, independent of dot_mod1.
bool naive_qualifies(const std::vector<std::int64_t>& xi, const TorusPoint& theta, std::int64_t n, double eps) {
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < xi.size(); ++i)
    acc += static_cast<unsigned __int128>(static_cast<__int128>(xi[i]) * n) * theta[i];
  const auto r = static_cast<std::uint64_t>(acc);
  const double x = static_cast<double>(r) * 0x1p-64;
  return r == 0 || std::min(x, 1 - x) < eps;
}

Vecs naive_residues(const TorusPoint& theta, std::int64_t n, std::int64_t B, double eps) {
  Vecs out;
  const std::size_t D = theta.dim();
  std::vector<std::int64_t> xi(D, -(B - 1));
  for (;;) {
    if (naive_qualifies(xi, theta, n, eps)) out.push_back(xi);
    std::size_t i = D;
    while (i > 0 && xi[i - 1] == B - 1) xi[--i] = -(B - 1);
    if (i == 0) break;
    ++xi[i - 1];
  }
  return out;
}

}  // namespace

TEST(Diophantine, ResidueExamples) {
  const auto all = residue_set(TorusPoint::from_reals({0.5}), 2, 3, 0.01);
  EXPECT_EQ(all.xi_list.size(), 5u);
  EXPECT_EQ(all.rank, 1u);

  const auto theta = random_theta(1, 3);
  const auto zero = residue_set(theta, 7, 3, 0.0);
  ASSERT_EQ(zero.xi_list.size(), 1u);
  EXPECT_EQ(zero.xi_list[0], (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(zero.rank, 0u);
}

TEST(Diophantine, ResidueMatchesNaiveEnumeration) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto theta = random_theta(seed, 3);
    for (std::int64_t n : {1, 2, 17, 1000}) {
      const auto r = residue_set(theta, n, 4, 0.05);
      const auto naive = naive_residues(theta, n, 4, 0.05);
      EXPECT_EQ(r.xi_list, naive);
      EXPECT_EQ(r.rank, rational_rank(naive));
    }
  }
}

TEST(Diophantine, ResidueSymmetric) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = residue_set(random_theta(seed + 40, 4), 3, 3, 0.1);
    for (const auto& xi : r.xi_list) {
      auto neg = xi;
      for (auto& v : neg) v = -v;
      EXPECT_NE(std::find(r.xi_list.begin(), r.xi_list.end(), neg), r.xi_list.end());
    }
  }
}

TEST(Diophantine, BoxTooLarge) {
  EXPECT_THROW(residue_set(random_theta(1, 8), 1, 10, 0.1), BoxTooLarge);
  EXPECT_THROW(residue_set(random_theta(1, 2), 1, 10, 0.1, 100), BoxTooLarge);
}

TEST(Diophantine, RankExamples) {
  EXPECT_EQ(integer_rank({{1, 0}, {0, 1}}), 2u);
  EXPECT_EQ(integer_rank({{2, 4}, {1, 2}}), 1u);
  EXPECT_EQ(integer_rank({}), 0u);
  EXPECT_EQ(integer_rank({{0, 0, 0}}), 0u);
}

TEST(Diophantine, RankMatchesMinorOracle) {
  CounterStream s(3, StreamTag::kTest);
  for (int t = 0; t < 50; ++t) {
    const std::size_t rows = 1 + s.below(5), cols = 1 + s.below(5);
    Vecs v(rows, std::vector<std::int64_t>(cols));
    // Low-rank cases from combinations of a few base rows.
    const std::size_t base = 1 + s.below(rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        if (i < base) {
          v[i][j] = static_cast<std::int64_t>(s.below(7)) - 3;
        } else {
          const auto a = static_cast<std::int64_t>(s.below(5)) - 2;
          v[i][j] = a * v[0][j] + v[i % base][j];
        }
      }
    EXPECT_EQ(integer_rank(v), minor_rank(v)) << t;
  }
}

TEST(Diophantine, RankInvariantUnderRowOperations) {
  CounterStream s(4, StreamTag::kTest);
  for (int t = 0; t < 50; ++t) {
    Vecs v(4, std::vector<std::int64_t>(4));
    for (auto& row : v)
      for (auto& x : row) x = static_cast<std::int64_t>(s.below(5)) - 2;
    const auto r = integer_rank(v);
    auto w = v;
    std::swap(w[0], w[3]);
    EXPECT_EQ(integer_rank(w), r);
    for (auto& x : w[1]) x = -x;
    EXPECT_EQ(integer_rank(w), r);
    for (std::size_t j = 0; j < 4; ++j) w[2][j] += w[1][j];
    EXPECT_EQ(integer_rank(w), r);
  }
}

TEST(Diophantine, ThetaExamples) {
  const auto range = NRange::exhaustive(50);
  const auto zero = theta_in_Theta(TorusPoint(4), range, 3, 0.02, 2);
  EXPECT_FALSE(zero.in_theta);
  EXPECT_EQ(zero.first_bad_n, 1);
  EXPECT_EQ(zero.max_rank, 4u);

  const auto none = theta_in_Theta(random_theta(5, 4), range, 3, 0.0, 1);
  EXPECT_TRUE(none.in_theta);
  EXPECT_EQ(none.max_rank, 0u);
}

TEST(Diophantine, ThetaMatchesNaiveRecomputation) {
  const auto range = NRange::exhaustive(4096);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto theta = random_theta(seed + 70, 4);
    // eps small enough that some thetas survive for a while.
    for (double eps : {0.02, 0.002, 0.0002}) {
      const auto v = theta_in_Theta(theta, range, 3, eps, 2);
      std::optional<std::int64_t> first_bad;
      std::size_t max_rank = 0;
      for (std::int64_t n = 1; n <= 4096 && !first_bad; ++n) {
        const auto r = rational_rank(naive_residues(theta, n, 3, eps));
        max_rank = std::max(max_rank, r);
        if (r >= 2) first_bad = n;
      }
      EXPECT_EQ(v.in_theta, !first_bad.has_value());
      EXPECT_EQ(v.first_bad_n, first_bad);
      EXPECT_EQ(v.max_rank, max_rank);
    }
  }
}

TEST(Diophantine, MonotoneInEps) {
  const auto range = NRange::exhaustive(512);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto theta = random_theta(seed + 90, 3);
    bool prev_in = false;
    for (double eps : {0.05, 0.01, 0.003, 0.001, 0.0003}) {
      const bool in = theta_in_Theta(theta, range, 3, eps, 2).in_theta;
      EXPECT_TRUE(!prev_in || in);
      prev_in = in;
    }
  }
}

TEST(Diophantine, NRangeShapes) {
  EXPECT_EQ(NRange::exhaustive(5).values, (std::vector<std::int64_t>{1, 2, 3, 4, 5}));
  const auto r = NRange::log_spaced(1'000'000, 100, 10);
  EXPECT_EQ(r.values.front(), 1);
  EXPECT_EQ(r.values.back(), 1'000'000);
  EXPECT_TRUE(std::is_sorted(r.values.begin(), r.values.end()));
  EXPECT_EQ(std::adjacent_find(r.values.begin(), r.values.end()), r.values.end());
  EXPECT_EQ(NRange::standard(100).values.size(), 100u);
}

TEST(Diophantine, MeasureTrivialCases) {
  const auto range = NRange::exhaustive(256);
  const auto zero_eps = measure_estimate(4, range, 3, 0.0, 1, 50, 1);
  EXPECT_EQ(zero_eps.fraction, 1.0);
  const auto vacuous = measure_estimate(4, range, 3, 0.02, 5, 20, 1);
  EXPECT_EQ(vacuous.fraction, 1.0);
  EXPECT_EQ(vacuous.union_bound, 0.0);
  EXPECT_EQ(zero_eps.rows.size(), 50u);
  EXPECT_DOUBLE_EQ(zero_eps.comparison, 1 - 1.0 / 256);
}

TEST(Diophantine, MeasureDeterministic) {
  const auto range = NRange::exhaustive(64);
  const auto a = measure_estimate(3, range, 3, 0.01, 2, 30, 9);
  const auto b = measure_estimate(3, range, 3, 0.01, 2, 30, 9);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].in_theta, b.rows[i].in_theta);
    EXPECT_EQ(a.rows[i].first_bad_n, b.rows[i].first_bad_n);
  }
}

TEST(Diophantine, UnionBoundIndependentCount) {
  // Sign classes of nonzero xi in {-2..2}^4, and pairs of them that are not parallel.
  Vecs classes;
  for (std::int64_t a = -2; a <= 2; ++a)
    for (std::int64_t b = -2; b <= 2; ++b)
      for (std::int64_t c = -2; c <= 2; ++c)
        for (std::int64_t d = -2; d <= 2; ++d) {
          const std::vector<std::int64_t> v{a, b, c, d};
          const auto nz = std::find_if(v.begin(), v.end(), [](auto x) { return x != 0; });
          if (nz != v.end() && *nz > 0) classes.push_back(v);
        }
  ASSERT_EQ(classes.size(), 312u);
  double pairs = 0;
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      bool parallel = true;
      for (int p = 0; p < 4 && parallel; ++p)
        for (int q = p + 1; q < 4 && parallel; ++q)
          parallel = classes[i][p] * classes[j][q] == classes[i][q] * classes[j][p];
      pairs += parallel ? 0 : 1;
    }
  const double expected = 4096 * pairs * 0.04 * 0.04;
  EXPECT_NEAR(complement_union_bound(4, 4096, 3, 0.02, 2), expected, 1e-9 * expected);
}

TEST(Diophantine, CsvColumns) {
  const auto est = measure_estimate(2, NRange::exhaustive(16), 2, 0.2, 1, 3, 0);
  std::ostringstream out;
  write_measure_csv(out, est);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "trial,in_Theta,first_bad_n,max_rank");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
