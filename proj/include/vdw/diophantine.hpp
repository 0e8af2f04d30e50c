#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "vdw/lattice.hpp"
#include "vdw/torus.hpp"

namespace vdw {

/// Frequencies xi with |xi|_inf < B whose multiple n (xi . theta) is within eps
/// of an integer, and the rank of their rational span.
struct ResidueSet {
  std::int64_t n = 0;
  std::vector<std::vector<std::int64_t>> xi_list;
  std::size_t rank = 0;
};

/// A frequency qualifies when ||n (xi . theta)||_T < eps or the residue is
/// exactly zero (so xi = 0 always qualifies). Throws BoxTooLarge when
/// (2B-1)^D exceeds cap.
ResidueSet residue_set(const TorusPoint& theta, std::int64_t n, std::int64_t B, double eps,
                       std::uint64_t cap = kDefaultEnumerationCap);

std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors);

/// The multiples n checked for membership.
struct NRange {
  std::int64_t N = 0;
  std::vector<std::int64_t> values;

  /// Every n in [N].
  static NRange exhaustive(std::int64_t N);
  /// Every n up to cutoff, then `per_decade` log-spaced values up to N (N included).
  static NRange log_spaced(std::int64_t N, std::int64_t cutoff, int per_decade = 20);
  /// exhaustive when N <= 2^16, otherwise log_spaced with cutoff 2^16.
  static NRange standard(std::int64_t N);
};

struct ThetaVerdict {
  bool in_theta = true;
  std::optional<std::int64_t> first_bad_n;
  std::size_t max_rank = 0;  // largest rank seen among the n examined
};

/// In Theta iff residue_set(theta, n, B, eps).rank < rank_max for every n.
ThetaVerdict theta_in_Theta(const TorusPoint& theta, const NRange& n_range, std::int64_t B, double eps,
                            std::size_t rank_max, std::uint64_t cap = kDefaultEnumerationCap);

/// Upper bound on the measure of the complement of Theta: for each n, the
/// number of rationally independent rank_max-sets of frequencies (up to sign)
/// times (2 eps)^rank_max. Exact count when the subsets are few enough,
/// otherwise the binomial count of all subsets.
double complement_union_bound(int D, std::size_t n_count, std::int64_t B, double eps, std::size_t rank_max);

struct MeasureRow {
  std::int64_t trial = 0;
  bool in_theta = false;
  std::optional<std::int64_t> first_bad_n;
  std::size_t max_rank = 0;
};

struct MeasureEstimate {
  std::int64_t trials = 0;
  std::int64_t in_theta = 0;
  double fraction = 0;
  double ci_low = 0;   // 95% Wilson interval
  double ci_high = 0;
  double comparison = 0;  // 1 - 1/N
  double union_bound = 0;
  double union_bound_fraction = 0;  // max(0, 1 - union_bound)
  std::vector<MeasureRow> rows;
};

/// Monte Carlo fraction of uniform theta in Theta; trial t draws theta from
/// the diophantine stream with sub index t.
MeasureEstimate measure_estimate(int D, const NRange& n_range, std::int64_t B, double eps,
                                 std::size_t rank_max, std::int64_t trials, std::uint64_t seed);

/// CSV with columns trial,in_Theta,first_bad_n,max_rank.
void write_measure_csv(std::ostream& out, const MeasureEstimate& estimate);

}  // namespace vdw
