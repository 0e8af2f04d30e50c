#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vdw/color_array.hpp"
#include "vdw/torus.hpp"

namespace vdw {

/// The progression n, n+d, ..., n+(length-1)d inside [N].
struct ApWitness {
  std::int64_t n = 0;
  std::int64_t d = 0;
  std::int64_t length = 0;
  Color color = Color::kRed;
  friend bool operator==(const ApWitness&, const ApWitness&) = default;
};

/// True iff the witness fits in [N] and every position has the stated color.
bool witness_holds(const ColorArray& colors, const ApWitness& w);

/// First (d, n) in lexicographic order with n, n+d, n+2d all blue.
std::optional<ApWitness> find_blue_3ap(const ColorArray& colors);

/// A longest red AP; ties go to the smallest d, then the smallest n. All-blue
/// (or empty) input yields length 0 with n = d = 0; a lone red point has d = 1.
ApWitness longest_red_ap(const ColorArray& colors);

struct GapCheck {
  bool pass = false;
  std::int64_t argmin_d = 0;
  double min_norm = 0;
  double radius = 0;
};

/// Passes iff ||d theta||_T^D > radius for every d in [N].
GapCheck theta_gap_check(const TorusPoint& theta, std::int64_t N, double radius);
/// Radius 1/2 N^{-2/D} with D = theta.dim().
GapCheck theta_gap_check(const TorusPoint& theta, std::int64_t N);

struct CertificateVerdict {
  bool accept = false;
  std::optional<ApWitness> blue;
  ApWitness longest_red;
  std::string reason;
};

/// Accepts iff there is no blue 3-AP and no red k-AP.
CertificateVerdict verify_certificate(const ColorArray& colors, std::int64_t k);

}  // namespace vdw
