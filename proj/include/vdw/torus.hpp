#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vdw {

/// A point of the torus T^D. Each coordinate is an unsigned 64-bit numerator u
/// standing for u / 2^64 in [0, 1); addition and integer scaling wrap modulo
/// 2^64, which is exact arithmetic modulo 1.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim) : coords_(dim, 0) {}
  explicit TorusPoint(std::vector<std::uint64_t> coords) : coords_(std::move(coords)) {}

  /// Nearest fixed-point representative of the given reals, each reduced mod 1.
  static TorusPoint from_reals(std::span<const double> values);
  static TorusPoint from_reals(std::initializer_list<double> values) {
    return from_reals(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t dim() const { return coords_.size(); }
  std::uint64_t operator[](std::size_t i) const { return coords_[i]; }
  std::uint64_t& operator[](std::size_t i) { return coords_[i]; }
  std::span<const std::uint64_t> coords() const { return coords_; }

  TorusPoint& operator+=(const TorusPoint& other);
  TorusPoint& operator-=(const TorusPoint& other);
  friend TorusPoint operator+(TorusPoint a, const TorusPoint& b) { return a += b; }
  friend TorusPoint operator-(TorusPoint a, const TorusPoint& b) { return a -= b; }
  friend TorusPoint operator-(TorusPoint a);
  /// Wrapping integer multiple; negative n is allowed.
  friend TorusPoint operator*(std::int64_t n, const TorusPoint& x);

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<std::uint64_t> coords_;
};

/// Lift of one coordinate into (-1/2, 1/2]; 2^63 maps to +1/2.
double lift_coord(std::uint64_t u);
/// ||u||_T, the distance from u / 2^64 to the nearest integer.
double torus_coord_norm(std::uint64_t u);
/// Fixed-point numerator nearest to v mod 1.
std::uint64_t fixed_from_real(double v);

std::vector<double> lift(const TorusPoint& x);
double torus_sup_norm(const TorusPoint& x);

/// ||lift(x - center)||_2^2, summed in ascending coordinate order.
double lift_euclidean_norm_sq(const TorusPoint& x, const TorusPoint& center);

TorusPoint scalar_orbit_point(std::int64_t n, const TorusPoint& theta);

/// Exact xi . x modulo 1, as a fixed-point numerator.
std::uint64_t dot_mod1(std::span<const std::int64_t> xi, const TorusPoint& x);

struct AnnulusSpec {
  double width = 0;
  std::int64_t index = 0;
  TorusPoint center;
};

/// (k w)^2 <= r2 < ((k+1) w)^2, the band test shared by every membership query.
bool in_annulus_band(double r2, std::int64_t index, double width);

/// (k w)^2 <= ||lift(x - center)||^2 < ((k+1) w)^2.
bool annulus_contains(const AnnulusSpec& a, const TorusPoint& x);

/// D space-separated 16-digit hexadecimal numerators.
std::string to_hex(const TorusPoint& x);
TorusPoint torus_point_from_hex(const std::string& text);

}  // namespace vdw
