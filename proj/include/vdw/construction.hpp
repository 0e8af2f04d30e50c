#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "vdw/color_array.hpp"
#include "vdw/exact_linalg.hpp"
#include "vdw/params.hpp"
#include "vdw/torus.hpp"

namespace vdw {

enum class RadiusVariant {
  kIndependent,  // every center draws its own annulus index
  kShared,       // every center uses the first index
};

struct ColoringInstance {
  TorusPoint theta;
  std::vector<TorusPoint> centers;
  std::vector<std::int64_t> radii;
  RadiusVariant variant = RadiusVariant::kIndependent;
  ParameterSet params;
  std::uint64_t seed = 0;
};

TorusPoint sample_theta(int D, std::uint64_t seed);

/// 1-based center indices (i1, i2, i3).
struct CenterTriple {
  std::int64_t i1 = 0, i2 = 0, i3 = 0;
  friend bool operator==(const CenterTriple&, const CenterTriple&) = default;
  friend auto operator<=>(const CenterTriple&, const CenterTriple&) = default;
};

/// Lexicographically first triple, not all indices equal, with
/// ||x_i1 - 2 x_i2 + x_i3|| <= 10 rho; nullopt when the centers are separated.
std::optional<CenterTriple> verify_condition1(std::span<const TorusPoint> centers, double rho);

/// Uniform centers, resampling the whole set (fresh stream) while separation
/// fails, at most max_retries times. Throws RetriesExhausted.
std::vector<TorusPoint> sample_centers(std::int64_t M, int D, double rho, std::uint64_t seed,
                                       int max_retries);

std::vector<std::int64_t> sample_radii(std::int64_t M, std::int64_t K, std::uint64_t seed);

/// Samples theta, separated centers and radii from the parameter set, each on
/// its own stream keyed by seed.
ColoringInstance make_instance(const ParameterSet& params, std::uint64_t seed,
                               RadiusVariant variant = RadiusVariant::kIndependent,
                               int max_retries = 100);

/// Annulus index used for center i (depends on the variant).
std::int64_t effective_radius(const ColoringInstance& inst, std::size_t i);

/// Bit n set iff n*theta lies in some annulus around a center. Throws
/// InconsistentInstance on mismatched lengths, dimensions or radii out of range.
ColorArray build_coloring(const ColoringInstance& inst, std::int64_t N);

struct CenterHit {
  std::int64_t center = 0;    // 1-based
  std::int64_t position = 0;  // first AP position within the radius
  double distance = 0;
};

/// For each center, the first position n0 + t*d (t < X_len) whose orbit point
/// lies within lifted Euclidean distance radius (inclusive) of it.
std::vector<CenterHit> count_centers_hit(const TorusPoint& theta, std::int64_t d, std::int64_t n0,
                                         std::int64_t X_len, std::span<const TorusPoint> centers,
                                         double radius);

struct Condition2Options {
  int dim_max = 1;
  std::int64_t xi_bound = 2;
  int trials = 20;
  std::uint64_t seed = 0;
  double target_y = 0;
  /// Grid points per radius rho/10 along an axis (4 gives step rho/40).
  int u_divisions = 4;
  /// Restrict the u grid to a random 2-coordinate slice when D exceeds this.
  int full_grid_max_dim = 4;
  std::optional<TorusPoint> x_star;  // fixed x* for every trial (diagnostics)
};

struct Condition2Trial {
  IntMatrix generators;
  std::size_t lattice_points = 0;  // |V cap Z^D cap box|, zero vector included
  TorusPoint x_star;
  std::vector<std::size_t> slice;  // coordinates the u grid moves in
  std::int64_t count = 0;          // centers j admitting a good u
  bool meets_target = false;
};

struct Condition2Report {
  double target_y = 0;
  std::vector<Condition2Trial> trials;
};

/// Sampled diagnostic for the covering condition; not a proof.
Condition2Report spot_check_condition2(std::span<const TorusPoint> centers, double rho,
                                       const Condition2Options& options);

nlohmann::json to_json(const ColoringInstance& inst);
ColoringInstance instance_from_json(const nlohmann::json& j);

}  // namespace vdw
