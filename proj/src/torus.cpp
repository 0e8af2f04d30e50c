#include "vdw/torus.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "vdw/errors.hpp"

namespace vdw {

namespace {
constexpr double kTwo64 = 0x1.0p64;
constexpr std::uint64_t kHalf = std::uint64_t{1} << 63;
}  // namespace

std::uint64_t fixed_from_real(double v) {
  double frac = v - std::floor(v);
  // Scaling by 2^64 is exact; rounding can only push frac to exactly 1.
  long double scaled = std::nearbyint(static_cast<long double>(frac) * kTwo64);
  if (scaled >= static_cast<long double>(kTwo64)) return 0;
  return static_cast<std::uint64_t>(scaled);
}

TorusPoint TorusPoint::from_reals(std::span<const double> values) {
  std::vector<std::uint64_t> coords;
  coords.reserve(values.size());
  for (double v : values) coords.push_back(fixed_from_real(v));
  return TorusPoint(std::move(coords));
}

TorusPoint& TorusPoint::operator+=(const TorusPoint& other) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

TorusPoint& TorusPoint::operator-=(const TorusPoint& other) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

TorusPoint operator-(TorusPoint a) {
  for (auto& c : a.coords_) c = 0 - c;
  return a;
}

TorusPoint operator*(std::int64_t n, const TorusPoint& x) {
  TorusPoint out(x.dim());
  const auto factor = static_cast<std::uint64_t>(n);
  for (std::size_t i = 0; i < x.dim(); ++i) out.coords_[i] = factor * x.coords_[i];
  return out;
}

double lift_coord(std::uint64_t u) {
  if (u <= kHalf) return static_cast<double>(u) / kTwo64;
  return -static_cast<double>(0 - u) / kTwo64;
}

double torus_coord_norm(std::uint64_t u) {
  const std::uint64_t m = u <= kHalf ? u : 0 - u;
  return static_cast<double>(m) / kTwo64;
}

std::vector<double> lift(const TorusPoint& x) {
  std::vector<double> out;
  out.reserve(x.dim());
  for (auto u : x.coords()) out.push_back(lift_coord(u));
  return out;
}

double torus_sup_norm(const TorusPoint& x) {
  std::uint64_t best = 0;
  for (auto u : x.coords()) {
    const std::uint64_t m = u <= kHalf ? u : 0 - u;
    if (m > best) best = m;
  }
  return static_cast<double>(best) / kTwo64;
}

double lift_euclidean_norm_sq(const TorusPoint& x, const TorusPoint& center) {
  double sum = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double c = lift_coord(x[i] - center[i]);
    sum += c * c;
  }
  return sum;
}

TorusPoint scalar_orbit_point(std::int64_t n, const TorusPoint& theta) { return n * theta; }

std::uint64_t dot_mod1(std::span<const std::int64_t> xi, const TorusPoint& x) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < xi.size(); ++i) acc += static_cast<std::uint64_t>(xi[i]) * x[i];
  return acc;
}

bool in_annulus_band(double r2, std::int64_t index, double width) {
  const double inner = static_cast<double>(index) * width;
  const double outer = static_cast<double>(index + 1) * width;
  return inner * inner <= r2 && r2 < outer * outer;
}

bool annulus_contains(const AnnulusSpec& a, const TorusPoint& x) {
  return in_annulus_band(lift_euclidean_norm_sq(x, a.center), a.index, a.width);
}

std::string to_hex(const TorusPoint& x) {
  std::string out;
  char buf[17];
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) out.push_back(' ');
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x[i]));
    out += buf;
  }
  return out;
}

TorusPoint torus_point_from_hex(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::uint64_t> coords;
  std::string token;
  while (in >> token) {
    if (token.empty() || token.size() > 16) throw ConfigError("bad torus coordinate: " + token);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used, 16);
    } catch (const std::exception&) {
      throw ConfigError("bad torus coordinate: " + token);
    }
    if (used != token.size()) throw ConfigError("bad torus coordinate: " + token);
    coords.push_back(v);
  }
  return TorusPoint(std::move(coords));
}

}  // namespace vdw
