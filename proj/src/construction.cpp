#include "vdw/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdw/errors.hpp"
#include "vdw/lattice.hpp"
#include "vdw/parallel.hpp"
#include "vdw/rng.hpp"

namespace vdw {

namespace {

constexpr std::uint64_t kMaxGridCells = std::uint64_t{1} << 22;

// Uniform grid over T^D for shortlisting points near a query. A point within
// sup-norm distance `reach` of the query sits in one of the 3^D cells around
// the query's cell because the cell edge is at least `reach`.
class PointGrid {
 public:
  PointGrid(std::span<const TorusPoint> points, double reach) : points_(points) {
    dim_ = points.empty() ? 0 : points.front().dim();
    if (points.size() < 32 || dim_ == 0 || !(reach > 0) || reach >= 1.0 / 3) return;
    // Cap the table size, both absolutely and at a few cells per point, since
    // the table is rebuilt per instance; a coarser grid keeps the edge >= reach.
    const std::uint64_t max_cells = std::min<std::uint64_t>(kMaxGridCells, 8 * points.size());
    const double per_axis = std::floor(std::pow(static_cast<double>(max_cells), 1.0 / static_cast<double>(dim_)));
    std::uint64_t g = static_cast<std::uint64_t>(std::min(std::floor(1.0 / reach), per_axis));
    while (g >= 3 && std::pow(static_cast<double>(g), static_cast<double>(dim_)) > static_cast<double>(max_cells)) --g;
    const double neighbours = std::pow(3.0, static_cast<double>(dim_));
    if (g < 3 || neighbours > 4.0 * static_cast<double>(points.size())) return;

    side_ = g;
    std::uint64_t cells = 1;
    for (std::size_t i = 0; i < dim_; ++i) cells *= side_;
    start_.assign(cells + 1, 0);
    std::vector<std::uint64_t> cell_of(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
      cell_of[j] = cell_index(points[j]);
      ++start_[cell_of[j] + 1];
    }
    for (std::uint64_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    members_.resize(points.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t j = 0; j < points.size(); ++j) members_[fill[cell_of[j]]++] = static_cast<std::uint32_t>(j);
    linear_ = false;
  }

  bool linear() const { return linear_; }

  /// Calls fn(j) for a superset of the points within reach of x.
  template <typename Fn>
  void for_candidates(const TorusPoint& x, Fn&& fn) const {
    if (linear_) {
      for (std::size_t j = 0; j < points_.size(); ++j) fn(j);
      return;
    }
    std::vector<std::uint64_t> base(dim_);
    for (std::size_t i = 0; i < dim_; ++i) base[i] = coord_cell(x[i]);
    std::vector<std::int64_t> offset(dim_, -1);
    for (;;) {
      std::uint64_t cell = 0;
      for (std::size_t i = dim_; i-- > 0;) {
        cell = cell * side_ + (base[i] + side_ + offset[i]) % side_;
      }
      for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) fn(members_[k]);
      std::size_t i = 0;
      while (i < dim_ && offset[i] == 1) offset[i++] = -1;
      if (i == dim_) break;
      ++offset[i];
    }
  }

 private:
  std::uint64_t coord_cell(std::uint64_t u) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(u) * side_) >> 64);
  }
  std::uint64_t cell_index(const TorusPoint& x) const {
    std::uint64_t cell = 0;
    for (std::size_t i = dim_; i-- > 0;) cell = cell * side_ + coord_cell(x[i]);
    return cell;
  }

  std::span<const TorusPoint> points_;
  std::size_t dim_ = 0;
  bool linear_ = true;
  std::uint64_t side_ = 0;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> members_;
};

void check_instance(const ColoringInstance& inst) {
  const auto D = static_cast<std::size_t>(inst.params.D);
  if (inst.params.mode != ScaleMode::kDesk || !inst.params.K)
    throw InconsistentInstance("build_coloring needs desk-scale parameters");
  if (inst.theta.dim() != D) throw InconsistentInstance("theta dimension differs from D");
  if (inst.radii.size() != inst.centers.size())
    throw InconsistentInstance("radii length differs from the number of centers");
  if (inst.variant == RadiusVariant::kShared && !inst.centers.empty() && inst.radii.empty())
    throw InconsistentInstance("shared-radius variant needs one radius");
  for (const auto& c : inst.centers)
    if (c.dim() != D) throw InconsistentInstance("center dimension differs from D");
  for (auto e : inst.radii)
    if (e < 0 || e > *inst.params.K) throw InconsistentInstance("radius index outside {0..K}");
}

}  // namespace

TorusPoint sample_theta(int D, std::uint64_t seed) {
  CounterStream stream(seed, StreamTag::kTheta);
  TorusPoint theta(static_cast<std::size_t>(std::max(D, 0)));
  for (std::size_t i = 0; i < theta.dim(); ++i) theta[i] = stream.next();
  return theta;
}

std::optional<CenterTriple> verify_condition1(std::span<const TorusPoint> centers, double rho) {
  const std::size_t M = centers.size();
  if (M < 2) return std::nullopt;
  const double limit = 10 * rho;
  auto violates = [&](std::size_t a, std::size_t b, std::size_t c) {
    return !(torus_sup_norm(centers[a] - 2 * centers[b] + centers[c]) > limit);
  };

  std::vector<TorusPoint> doubled;
  doubled.reserve(M);
  for (const auto& x : centers) doubled.push_back(2 * x);
  const PointGrid grid(doubled, limit);

  if (grid.linear()) {
    for (std::size_t a = 0; a < M; ++a)
      for (std::size_t b = 0; b < M; ++b)
        for (std::size_t c = 0; c < M; ++c) {
          if (a == b && b == c) continue;
          if (violates(a, b, c))
            return CenterTriple{static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(b + 1),
                                static_cast<std::int64_t>(c + 1)};
        }
    return std::nullopt;
  }

  // x_a + x_c must land within 10 rho of 2 x_b; look b up in the grid.
  std::optional<CenterTriple> best;
  for (std::size_t a = 0; a < M; ++a) {
    for (std::size_t c = a; c < M; ++c) {
      const TorusPoint target = centers[a] + centers[c];
      grid.for_candidates(target, [&](std::size_t b) {
        if (a == b && b == c) return;
        if (!(torus_sup_norm(target - doubled[b]) > limit)) {
          const auto ia = static_cast<std::int64_t>(a + 1), ib = static_cast<std::int64_t>(b + 1),
                     ic = static_cast<std::int64_t>(c + 1);
          const CenterTriple t = std::min(CenterTriple{ia, ib, ic}, CenterTriple{ic, ib, ia});
          if (!best || t < *best) best = t;
        }
      });
    }
  }
  return best;
}

std::vector<TorusPoint> sample_centers(std::int64_t M, int D, double rho, std::uint64_t seed,
                                       int max_retries) {
  if (M < 1) throw ConstraintViolation("sample_centers: M >= 1 required");
  std::optional<CenterTriple> last;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    CounterStream stream(seed, StreamTag::kCenters, static_cast<std::uint64_t>(attempt));
    std::vector<TorusPoint> centers;
    centers.reserve(static_cast<std::size_t>(M));
    for (std::int64_t j = 0; j < M; ++j) {
      TorusPoint x(static_cast<std::size_t>(D));
      for (int i = 0; i < D; ++i) x[static_cast<std::size_t>(i)] = stream.next();
      centers.push_back(std::move(x));
    }
    last = verify_condition1(centers, rho);
    if (!last) return centers;
  }
  std::ostringstream msg;
  msg << "sample_centers: separation failed after " << max_retries << " retries; last violating triple ("
      << last->i1 << "," << last->i2 << "," << last->i3 << ")";
  throw RetriesExhausted(msg.str());
}

std::vector<std::int64_t> sample_radii(std::int64_t M, std::int64_t K, std::uint64_t seed) {
  if (K < 0) throw ConstraintViolation("sample_radii: K >= 0 required");
  CounterStream stream(seed, StreamTag::kRadii);
  std::vector<std::int64_t> radii(static_cast<std::size_t>(std::max<std::int64_t>(M, 0)));
  for (auto& e : radii) e = static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(K) + 1));
  return radii;
}

ColoringInstance make_instance(const ParameterSet& params, std::uint64_t seed, RadiusVariant variant,
                               int max_retries) {
  if (params.mode != ScaleMode::kDesk) throw InconsistentInstance("make_instance needs desk-scale parameters");
  ColoringInstance inst;
  inst.params = params;
  inst.seed = seed;
  inst.variant = variant;
  inst.theta = sample_theta(params.D, seed);
  inst.centers = sample_centers(*params.M, params.D, params.rho, seed, max_retries);
  inst.radii = sample_radii(*params.M, *params.K, seed);
  return inst;
}

std::int64_t effective_radius(const ColoringInstance& inst, std::size_t i) {
  return inst.variant == RadiusVariant::kShared ? inst.radii.front() : inst.radii[i];
}

ColorArray build_coloring(const ColoringInstance& inst, std::int64_t N) {
  check_instance(inst);
  if (N < 0) throw InconsistentInstance("N must be nonnegative");
  ColorArray colors(N);
  if (inst.centers.empty() || N == 0) return colors;

  const double width = inst.params.width;
  std::int64_t max_index = 0;
  for (std::size_t i = 0; i < inst.centers.size(); ++i) max_index = std::max(max_index, effective_radius(inst, i));
  const PointGrid grid(inst.centers, static_cast<double>(max_index + 1) * width);

  auto blue_at = [&](const TorusPoint& p) {
    bool blue = false;
    grid.for_candidates(p, [&](std::size_t i) {
      if (!blue && in_annulus_band(lift_euclidean_norm_sq(p, inst.centers[i]), effective_radius(inst, i), width))
        blue = true;
    });
    return blue;
  };

  // Word-aligned chunks so every task owns a disjoint bit range.
  constexpr std::int64_t kChunk = 64 * 256;
  const std::int64_t chunks = (N + kChunk - 1) / kChunk;
  auto words = colors.words();
  parallel_for(chunks, [&](std::int64_t chunk) {
    const std::int64_t first = chunk * kChunk + 1;
    const std::int64_t last = std::min(N, first + kChunk - 1);
    TorusPoint p = scalar_orbit_point(first, inst.theta);
    for (std::int64_t n = first; n <= last; ++n, p += inst.theta) {
      if (blue_at(p)) {
        const auto b = static_cast<std::uint64_t>(n - 1);
        words[b >> 6] |= std::uint64_t{1} << (b & 63);
      }
    }
  });
  return colors;
}

std::vector<CenterHit> count_centers_hit(const TorusPoint& theta, std::int64_t d, std::int64_t n0,
                                         std::int64_t X_len, std::span<const TorusPoint> centers,
                                         double radius) {
  if (X_len < 1) throw Error("count_centers_hit: X_len >= 1 required");
  std::vector<CenterHit> hits;
  if (centers.empty()) return hits;
  const double r2max = radius * radius;
  const PointGrid grid(centers, std::max(radius, 1e-300));
  std::vector<std::int64_t> first(centers.size(), 0);
  std::vector<double> dist(centers.size(), 0);
  std::size_t remaining = centers.size();
  const TorusPoint step = scalar_orbit_point(d, theta);
  TorusPoint p = scalar_orbit_point(n0, theta);
  for (std::int64_t t = 0; t < X_len && remaining > 0; ++t, p += step) {
    grid.for_candidates(p, [&](std::size_t j) {
      if (first[j] != 0) return;
      const double r2 = lift_euclidean_norm_sq(p, centers[j]);
      if (r2 <= r2max) {
        first[j] = n0 + t * d;
        dist[j] = std::sqrt(r2);
        --remaining;
      }
    });
  }
  for (std::size_t j = 0; j < centers.size(); ++j)
    if (first[j] != 0) hits.push_back({static_cast<std::int64_t>(j + 1), first[j], dist[j]});
  return hits;
}

Condition2Report spot_check_condition2(std::span<const TorusPoint> centers, double rho,
                                       const Condition2Options& options) {
  Condition2Report report;
  report.target_y = options.target_y;
  if (centers.empty()) return report;
  const std::size_t D = centers.front().dim();
  if (options.dim_max < 0 || static_cast<std::size_t>(options.dim_max) > D)
    throw ConstraintViolation("spot_check_condition2: dim_max must lie in [0, D]");
  const int R = options.u_divisions;
  const double u_step = rho / 10 / R;

  for (int trial = 0; trial < options.trials; ++trial) {
    CounterStream stream(options.seed, StreamTag::kCondition2, static_cast<std::uint64_t>(trial));
    Condition2Trial out;
    const auto span_width = static_cast<std::uint64_t>(2 * options.xi_bound + 1);
    for (int g = 0; g < options.dim_max; ++g) {
      IntVec v(D);
      for (auto& e : v) e = static_cast<std::int64_t>(stream.below(span_width)) - options.xi_bound;
      out.generators.push_back(std::move(v));
    }
    if (options.x_star) {
      out.x_star = *options.x_star;
    } else {
      out.x_star = TorusPoint(D);
      for (std::size_t i = 0; i < D; ++i) out.x_star[i] = stream.next();
    }

    std::vector<std::vector<std::int64_t>> xis;  // nonzero frequencies to test
    if (!out.generators.empty() && rank(out.generators) > 0) {
      const IntMatrix points = enumerate_bounded_points(out.generators, options.xi_bound);
      out.lattice_points = points.size();
      for (const auto& p : points)
        if (!is_zero(p)) xis.push_back(to_int64(p));
    } else {
      out.lattice_points = 1;
    }

    if (static_cast<int>(D) > options.full_grid_max_dim) {
      std::vector<std::size_t> coords(D);
      for (std::size_t i = 0; i < D; ++i) coords[i] = i;
      for (std::size_t i = 0; i < 2; ++i) std::swap(coords[i], coords[i + stream.below(D - i)]);
      out.slice = {std::min(coords[0], coords[1]), std::max(coords[0], coords[1])};
    } else {
      for (std::size_t i = 0; i < D; ++i) out.slice.push_back(i);
    }

    // Integer offsets a on the slice with |a|_2 < R, i.e. |u|_2 < rho/10.
    std::vector<std::vector<int>> offsets;
    {
      std::vector<int> a(out.slice.size(), -R);
      for (;;) {
        long sq = 0;
        for (int v : a) sq += static_cast<long>(v) * v;
        if (sq < static_cast<long>(R) * R) offsets.push_back(a);
        std::size_t i = 0;
        while (i < a.size() && a[i] == R) a[i++] = -R;
        if (i == a.size()) break;
        ++a[i];
      }
    }

    for (const auto& x : centers) {
      const TorusPoint diff = x - out.x_star;
      std::vector<double> base;  // xi . (x_j - x*) lifted to (-1/2, 1/2]
      base.reserve(xis.size());
      for (const auto& xi : xis) base.push_back(lift_coord(dot_mod1(xi, diff)));
      bool good = false;
      for (const auto& a : offsets) {
        bool all = true;
        for (std::size_t k = 0; k < xis.size() && all; ++k) {
          double shift = 0;
          for (std::size_t s = 0; s < out.slice.size(); ++s)
            shift += static_cast<double>(xis[k][out.slice[s]]) * a[s] * u_step;
          const double v = base[k] + shift;
          all = std::abs(v - std::nearbyint(v)) < 0.01;
        }
        if (all) {
          good = true;
          break;
        }
      }
      if (good) ++out.count;
    }
    out.meets_target = static_cast<double>(out.count) >= options.target_y;
    report.trials.push_back(std::move(out));
  }
  return report;
}

nlohmann::json to_json(const ColoringInstance& inst) {
  nlohmann::json j;
  j["config"] = to_json(inst.params, inst.seed);
  j["variant"] = inst.variant == RadiusVariant::kShared ? "shared" : "independent";
  j["theta"] = to_hex(inst.theta);
  auto& centers = j["centers"] = nlohmann::json::array();
  for (const auto& c : inst.centers) centers.push_back(to_hex(c));
  j["radii"] = inst.radii;
  return j;
}

ColoringInstance instance_from_json(const nlohmann::json& j) {
  ColoringInstance inst;
  try {
    const RunConfig cfg = run_config_from_json(j.at("config"));
    inst.params = cfg.params;
    inst.seed = cfg.seed;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "shared") {
      inst.variant = RadiusVariant::kShared;
    } else if (variant == "independent") {
      inst.variant = RadiusVariant::kIndependent;
    } else {
      throw ConfigError("unknown variant: " + variant);
    }
    inst.theta = torus_point_from_hex(j.at("theta").get<std::string>());
    for (const auto& c : j.at("centers")) inst.centers.push_back(torus_point_from_hex(c.get<std::string>()));
    inst.radii = j.at("radii").get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance parse error: ") + e.what());
  }
  return inst;
}

}  // namespace vdw
