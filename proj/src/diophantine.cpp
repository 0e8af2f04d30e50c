#include "vdw/diophantine.hpp"

#include <algorithm>
#include <cmath>

#include "vdw/errors.hpp"
#include "vdw/exact_linalg.hpp"
#include "vdw/parallel.hpp"
#include "vdw/rng.hpp"

namespace vdw {

namespace {

// All xi with |xi|_inf < B, lexicographic.
std::vector<std::vector<std::int64_t>> box_points(int D, std::int64_t B, std::uint64_t cap) {
  if (B < 1) throw ConstraintViolation("xi bound B must be >= 1");
  const double side = static_cast<double>(2 * B - 1);
  if (std::pow(side, D) > static_cast<double>(cap)) throw BoxTooLarge("(2B-1)^D exceeds the enumeration cap");
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> xi(static_cast<std::size_t>(D), -(B - 1));
  for (;;) {
    out.push_back(xi);
    int i = D - 1;
    while (i >= 0 && xi[static_cast<std::size_t>(i)] == B - 1) xi[static_cast<std::size_t>(i--)] = -(B - 1);
    if (i < 0) break;
    ++xi[static_cast<std::size_t>(i)];
  }
  return out;
}

bool qualifies(std::uint64_t residue, double eps) { return residue == 0 || torus_coord_norm(residue) < eps; }

// Cached xi . theta for every box point; the per-n residue is then one wrapping multiply.
struct ResidueTable {
  std::vector<std::vector<std::int64_t>> xis;
  std::vector<std::uint64_t> dots;

  ResidueTable(const TorusPoint& theta, std::int64_t B, std::uint64_t cap)
      : xis(box_points(static_cast<int>(theta.dim()), B, cap)) {
    dots.reserve(xis.size());
    for (const auto& xi : xis) dots.push_back(dot_mod1(xi, theta));
  }

  std::vector<std::size_t> qualifying(std::int64_t n, double eps, bool nonzero_only) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xis.size(); ++i) {
      if (nonzero_only && std::all_of(xis[i].begin(), xis[i].end(), [](auto v) { return v == 0; })) continue;
      if (qualifies(static_cast<std::uint64_t>(n) * dots[i], eps)) idx.push_back(i);
    }
    return idx;
  }

  std::size_t rank_of(const std::vector<std::size_t>& idx) const {
    IntMatrix rows;
    rows.reserve(idx.size());
    for (auto i : idx) rows.push_back(to_big(xis[i]));
    return rank(std::move(rows));
  }
};

double binomial(double n, std::size_t r) {
  double out = 1;
  for (std::size_t i = 0; i < r; ++i) out = out * (n - static_cast<double>(i)) / static_cast<double>(i + 1);
  return std::max(out, 0.0);
}

}  // namespace

ResidueSet residue_set(const TorusPoint& theta, std::int64_t n, std::int64_t B, double eps, std::uint64_t cap) {
  const ResidueTable table(theta, B, cap);
  ResidueSet out;
  out.n = n;
  const auto idx = table.qualifying(n, eps, false);
  for (auto i : idx) out.xi_list.push_back(table.xis[i]);
  out.rank = table.rank_of(idx);
  return out;
}

std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors) {
  IntMatrix rows;
  for (const auto& v : vectors) rows.push_back(to_big(v));
  return rank(std::move(rows));
}

NRange NRange::exhaustive(std::int64_t N) {
  NRange r;
  r.N = N;
  for (std::int64_t n = 1; n <= N; ++n) r.values.push_back(n);
  return r;
}

NRange NRange::log_spaced(std::int64_t N, std::int64_t cutoff, int per_decade) {
  NRange r;
  r.N = N;
  const std::int64_t top = std::min(N, cutoff);
  for (std::int64_t n = 1; n <= top; ++n) r.values.push_back(n);
  if (N > top) {
    const double step = std::pow(10.0, 1.0 / std::max(per_decade, 1));
    for (double x = static_cast<double>(top) * step; x < static_cast<double>(N); x *= step) {
      const auto n = static_cast<std::int64_t>(std::llround(x));
      if (n > r.values.back() && n < N) r.values.push_back(n);
    }
    r.values.push_back(N);
  }
  return r;
}

NRange NRange::standard(std::int64_t N) {
  constexpr std::int64_t kExhaustiveLimit = std::int64_t{1} << 16;
  return N <= kExhaustiveLimit ? exhaustive(N) : log_spaced(N, kExhaustiveLimit);
}

ThetaVerdict theta_in_Theta(const TorusPoint& theta, const NRange& n_range, std::int64_t B, double eps,
                            std::size_t rank_max, std::uint64_t cap) {
  if (rank_max < 1) throw ConstraintViolation("rank_max must be >= 1");
  const ResidueTable table(theta, B, cap);
  ThetaVerdict v;
  for (const std::int64_t n : n_range.values) {
    const auto idx = table.qualifying(n, eps, true);
    if (idx.empty()) continue;
    const std::size_t r = table.rank_of(idx);
    v.max_rank = std::max(v.max_rank, r);
    if (r >= rank_max) {
      v.in_theta = false;
      v.first_bad_n = n;
      break;
    }
  }
  return v;
}

double complement_union_bound(int D, std::size_t n_count, std::int64_t B, double eps, std::size_t rank_max) {
  // One representative per sign class: the first nonzero coordinate is positive.
  std::vector<std::vector<std::int64_t>> classes;
  for (auto& xi : box_points(D, B, kDefaultEnumerationCap)) {
    const auto nz = std::find_if(xi.begin(), xi.end(), [](auto v) { return v != 0; });
    if (nz != xi.end() && *nz > 0) classes.push_back(std::move(xi));
  }
  if (rank_max > static_cast<std::size_t>(D)) return 0;

  double subsets = binomial(static_cast<double>(classes.size()), rank_max);
  constexpr double kExactLimit = 2e6;
  if (subsets <= kExactLimit) {
    std::vector<std::size_t> pick(rank_max);
    for (std::size_t i = 0; i < rank_max; ++i) pick[i] = i;
    double independent = 0;
    const std::size_t n = classes.size();
    while (rank_max <= n) {
      IntMatrix rows;
      for (auto i : pick) rows.push_back(to_big(classes[i]));
      if (rank(std::move(rows)) == rank_max) independent += 1;
      std::size_t i = rank_max;
      while (i > 0 && pick[i - 1] == n - rank_max + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < rank_max; ++j) pick[j] = pick[j - 1] + 1;
    }
    subsets = independent;
  }
  return static_cast<double>(n_count) * subsets * std::pow(2 * eps, static_cast<double>(rank_max));
}

MeasureEstimate measure_estimate(int D, const NRange& n_range, std::int64_t B, double eps, std::size_t rank_max,
                                 std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw ConstraintViolation("trials must be >= 1");
  MeasureEstimate est;
  est.trials = trials;
  est.rows.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](std::int64_t t) {
    CounterStream stream(seed, StreamTag::kDiophantine, static_cast<std::uint64_t>(t));
    TorusPoint theta(static_cast<std::size_t>(D));
    for (int i = 0; i < D; ++i) theta[static_cast<std::size_t>(i)] = stream.next();
    const ThetaVerdict v = theta_in_Theta(theta, n_range, B, eps, rank_max);
    est.rows[static_cast<std::size_t>(t)] = MeasureRow{t, v.in_theta, v.first_bad_n, v.max_rank};
  });
  for (const auto& row : est.rows) est.in_theta += row.in_theta ? 1 : 0;

  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(est.in_theta) / n;
  const double z = 1.96;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
  est.fraction = p;
  est.ci_low = std::max(0.0, centre - half);
  est.ci_high = std::min(1.0, centre + half);
  est.comparison = n_range.N > 0 ? 1.0 - 1.0 / static_cast<double>(n_range.N) : 0.0;
  est.union_bound = complement_union_bound(D, n_range.values.size(), B, eps, rank_max);
  est.union_bound_fraction = std::max(0.0, 1.0 - est.union_bound);
  return est;
}

void write_measure_csv(std::ostream& out, const MeasureEstimate& estimate) {
  out << "trial,in_Theta,first_bad_n,max_rank\n";
  for (const auto& row : estimate.rows) {
    out << row.trial << ',' << (row.in_theta ? 1 : 0) << ',';
    if (row.first_bad_n) out << *row.first_bad_n;
    out << ',' << row.max_rank << '\n';
  }
}

}  // namespace vdw
