#include "vdw/ap_verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace vdw {

namespace {

// 64 bits of the array starting at bit `offset`; bits past the end read as 0.
std::uint64_t bits_from(std::span<const std::uint64_t> words, std::uint64_t offset) {
  const std::size_t w = offset >> 6;
  const unsigned s = offset & 63;
  if (w >= words.size()) return 0;
  std::uint64_t out = words[w] >> s;
  if (s != 0 && w + 1 < words.size()) out |= words[w + 1] << (64 - s);
  return out;
}

}  // namespace

bool witness_holds(const ColorArray& colors, const ApWitness& w) {
  if (w.length < 1 || w.n < 1 || w.d < 1) return false;
  if (w.n + (w.length - 1) * w.d > colors.size()) return false;
  for (std::int64_t t = 0; t < w.length; ++t)
    if (colors.at(w.n + t * w.d) != w.color) return false;
  return true;
}

std::optional<ApWitness> find_blue_3ap(const ColorArray& colors) {
  const std::int64_t N = colors.size();
  const auto words = colors.words();
  for (std::int64_t d = 1; 2 * d < N; ++d) {
    // Bit b of the AND is set iff positions b+1, b+1+d, b+1+2d are blue.
    const auto last = static_cast<std::uint64_t>(N - 1 - 2 * d);  // largest valid bit
    for (std::uint64_t base = 0; base <= last; base += 64) {
      std::uint64_t hit = bits_from(words, base) & bits_from(words, base + static_cast<std::uint64_t>(d)) &
                          bits_from(words, base + 2 * static_cast<std::uint64_t>(d));
      if (last - base < 63) hit &= (std::uint64_t{2} << (last - base)) - 1;
      if (hit != 0) {
        const auto n = static_cast<std::int64_t>(base + static_cast<std::uint64_t>(std::countr_zero(hit))) + 1;
        return ApWitness{n, d, 3, Color::kBlue};
      }
    }
  }
  return std::nullopt;
}

ApWitness longest_red_ap(const ColorArray& colors) {
  const std::int64_t N = colors.size();
  ApWitness best;
  for (std::int64_t d = 1; d <= std::max<std::int64_t>(N - 1, 1); ++d) {
    // A longer AP needs best.length * d <= N - 1.
    if (best.length > 0 && best.length * d > N - 1) break;
    for (std::int64_t r = 1; r <= std::min(d, N); ++r) {
      std::int64_t run = 0, start = 0;
      for (std::int64_t p = r; p <= N; p += d) {
        if (colors.is_blue(p)) {
          run = 0;
          continue;
        }
        if (run++ == 0) start = p;
        if (run > best.length || (run == best.length && d == best.d && start < best.n))
          best = ApWitness{start, d, run, Color::kRed};
      }
    }
  }
  return best;
}

GapCheck theta_gap_check(const TorusPoint& theta, std::int64_t N, double radius) {
  GapCheck out;
  out.radius = radius;
  out.min_norm = std::numeric_limits<double>::infinity();
  TorusPoint p = theta;
  for (std::int64_t d = 1; d <= N; ++d, p += theta) {
    const double norm = torus_sup_norm(p);
    if (norm < out.min_norm) {
      out.min_norm = norm;
      out.argmin_d = d;
    }
  }
  out.pass = N < 1 || out.min_norm > radius;
  if (N < 1) out.min_norm = 0;
  return out;
}

GapCheck theta_gap_check(const TorusPoint& theta, std::int64_t N) {
  const double D = static_cast<double>(theta.dim());
  return theta_gap_check(theta, N, 0.5 * std::pow(static_cast<double>(N), -2.0 / D));
}

CertificateVerdict verify_certificate(const ColorArray& colors, std::int64_t k) {
  CertificateVerdict v;
  v.blue = find_blue_3ap(colors);
  v.longest_red = longest_red_ap(colors);
  if (v.blue) {
    v.reason = "blue 3-AP at n=" + std::to_string(v.blue->n) + " d=" + std::to_string(v.blue->d);
  } else if (v.longest_red.length >= k) {
    v.reason = "red AP of length " + std::to_string(v.longest_red.length) + " at n=" +
               std::to_string(v.longest_red.n) + " d=" + std::to_string(v.longest_red.d);
  } else {
    v.accept = true;
    v.reason = "no blue 3-AP, longest red AP has length " + std::to_string(v.longest_red.length);
  }
  return v;
}

}  // namespace vdw
