#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vdw {

using BigInt = boost::multiprecision::cpp_int;
using IntVec = std::vector<BigInt>;
using IntMatrix = std::vector<IntVec>;  // row-major

IntVec to_big(std::span<const std::int64_t> v);
std::vector<std::int64_t> to_int64(const IntVec& v);  // throws if an entry does not fit

BigInt sup_norm(const IntVec& v);
bool is_zero(const IntVec& v);

/// Rank over Q by fraction-free elimination (rows reduced by their content).
std::size_t rank(IntMatrix rows);

/// Columns of a full-row-rank matrix whose square minor is invertible.
std::vector<std::size_t> pivot_columns(const IntMatrix& rows);

BigInt determinant(IntMatrix a);
/// adj(A) with A * adj(A) = det(A) * I.
IntMatrix adjugate(const IntMatrix& a);

/// Primitive integer basis of { y in Q^cols : rows * y = 0 }.
IntMatrix rational_kernel(const IntMatrix& rows, std::size_t cols);

}  // namespace vdw
