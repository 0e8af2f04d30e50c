#pragma once

#include <cstdint>
#include <vector>

#include "vdw/exact_linalg.hpp"

namespace vdw {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Integral basis of the lattice generated by a finite point set, together with
/// the sup-norm certificate the coefficient bound relies on.
struct LatticeBasis {
  std::size_t dimension = 0;  // m
  IntMatrix vectors;          // m vectors of length D
  BigInt max_norm = 0;
  std::int64_t source_Q = 0;
  BigInt norm_bound = 0;      // D * Q
  bool norm_certified = false;
  /// Whether the basis also meets the sharper (m/2) * max|x_i| bound, measured
  /// against the independent points the construction started from.
  bool half_m_bound_met = false;
};

/// All x in span_Q(generators) with |x|_inf <= Q, in lexicographic order.
/// Throws CapExceeded when (2Q+1)^D exceeds cap.
IntMatrix enumerate_bounded_points(const IntMatrix& generators, std::int64_t Q,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// Short basis of the lattice generated by points. Q defaults to the largest
/// sup-norm among the points. Throws EmptyInput when the points are all zero.
LatticeBasis short_basis(const IntMatrix& points, std::int64_t Q = 0);

struct BasisExpression {
  std::vector<BigInt> coefficients;
  BigInt bound = 0;        // m! (D Q)^m
  bool bound_applies = false;  // |x|_inf <= Q
  bool within_bound = false;
};

/// Unique integer coordinates of x in the basis, via the adjugate of an
/// invertible m x m minor. Throws NotInLattice when no integer solution exists.
BasisExpression express_in_basis(const IntVec& x, const LatticeBasis& basis);

}  // namespace vdw
