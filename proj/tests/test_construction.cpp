#include <gtest/gtest.h>

#include <cmath>

#include "vdw/construction.hpp"
#include "vdw/errors.hpp"
#include "vdw/rng.hpp"

using namespace vdw;

namespace {

std::vector<TorusPoint> random_points(std::uint64_t seed, std::size_t count, std::size_t D) {
  CounterStream s(seed, StreamTag::kTest);
  std::vector<TorusPoint> out;
  for (std::size_t j = 0; j < count; ++j) {
    TorusPoint x(D);
    for (std::size_t i = 0; i < D; ++i) x[i] = s.next();
    out.push_back(x);
  }
  return out;
}

// Lexicographically first violating triple by brute force.
std::optional<CenterTriple> naive_condition1(const std::vector<TorusPoint>& c, double rho) {
  const auto M = static_cast<std::int64_t>(c.size());
  for (std::int64_t a = 0; a < M; ++a)
    for (std::int64_t b = 0; b < M; ++b)
      for (std::int64_t e = 0; e < M; ++e) {
        if (a == b && b == e) continue;
        if (torus_sup_norm(c[a] - 2 * c[b] + c[e]) <= 10 * rho) return CenterTriple{a + 1, b + 1, e + 1};
      }
  return std::nullopt;
}

ParameterSet manual_desk(int D, std::int64_t K, double width) {
  ParameterSet p;
  p.mode = ScaleMode::kDesk;
  p.D = D;
  p.K = K;
  p.width = width;
  p.rho = (K + 1) * width;
  return p;
}

ColoringInstance random_instance(std::uint64_t seed, std::size_t M, int D, std::int64_t K, double width) {
  ColoringInstance inst;
  inst.params = manual_desk(D, K, width);
  inst.theta = random_points(seed, 1, static_cast<std::size_t>(D)).front();
  inst.centers = random_points(seed + 1000, M, static_cast<std::size_t>(D));
  inst.radii = sample_radii(static_cast<std::int64_t>(M), K, seed);
  return inst;
}

// Membership by unsquared distance against every center.
bool naive_blue(const ColoringInstance& inst, std::int64_t n) {
  const TorusPoint p = scalar_orbit_point(n, inst.theta);
  for (std::size_t i = 0; i < inst.centers.size(); ++i) {
    const auto y = lift(p - inst.centers[i]);
    double r2 = 0;
    for (double v : y) r2 += v * v;
    const double r = std::sqrt(r2);
    const double lo = static_cast<double>(effective_radius(inst, i)) * inst.params.width;
    if (r >= lo && r < lo + inst.params.width) return true;
  }
  return false;
}

}  // namespace

TEST(Construction, SampleThetaDeterministic) {
  EXPECT_EQ(sample_theta(3, 7), sample_theta(3, 7));
  EXPECT_EQ(sample_theta(0, 7).dim(), 0u);
  EXPECT_NE(sample_theta(1, 1), sample_theta(1, 2));
}

TEST(Construction, SampleThetaGolden) {
  EXPECT_EQ(to_hex(sample_theta(1, 1)), "7f8a8ee5cbe2d348");
}

TEST(Construction, Condition1SmallCases) {
  EXPECT_FALSE(verify_condition1(random_points(1, 1, 4), 0.01));
  auto c = random_points(2, 3, 4);
  c[1] = c[0];
  const auto t = verify_condition1(c, 0.0);
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, (CenterTriple{1, 1, 2}));
}

TEST(Construction, Condition1MatchesNaiveOracle) {
  // rho = 0.001 is separated w.h.p.; 0.004 and 0.02 have violations. Grid and
  // linear paths are both exercised.
  for (double rho : {0.001, 0.004, 0.02, 0.05}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto c = random_points(seed * 17 + 3, 64, 4);
      EXPECT_EQ(verify_condition1(c, rho), naive_condition1(c, rho)) << rho << " " << seed;
    }
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto c = random_points(seed, 200, 2);
    EXPECT_EQ(verify_condition1(c, 0.0005), naive_condition1(c, 0.0005));
  }
}

TEST(Construction, SampleCenters) {
  const auto c = sample_centers(16, 4, 0.002, 3, 100);
  EXPECT_EQ(c.size(), 16u);
  EXPECT_FALSE(verify_condition1(c, 0.002));
  EXPECT_EQ(c, sample_centers(16, 4, 0.002, 3, 100));
  EXPECT_THROW(sample_centers(2, 1, 0.2, 5, 1), RetriesExhausted);
}

TEST(Construction, SampleRadii) {
  for (auto e : sample_radii(100, 0, 1)) EXPECT_EQ(e, 0);
  EXPECT_EQ(sample_radii(50, 7, 9), sample_radii(50, 7, 9));
  const std::int64_t M = 1'000'000;
  std::vector<std::int64_t> freq(8, 0);
  for (auto e : sample_radii(M, 7, 11)) {
    ASSERT_GE(e, 0);
    ASSERT_LE(e, 7);
    ++freq[static_cast<std::size_t>(e)];
  }
  const double p = 1.0 / 8, sigma = std::sqrt(M * p * (1 - p));
  for (auto f : freq) EXPECT_LE(std::abs(static_cast<double>(f) - M * p), 4 * sigma);
}

TEST(Construction, HandEvaluatedColoring) {
  ColoringInstance inst;
  inst.params = manual_desk(1, 0, 0.3);
  inst.theta = TorusPoint::from_reals({0.25});
  inst.centers = {TorusPoint(1)};
  inst.radii = {0};
  const auto colors = build_coloring(inst, 4);
  EXPECT_EQ(colors.to_string(), "BRBB");
}

TEST(Construction, NoCentersAllRed) {
  ColoringInstance inst;
  inst.params = manual_desk(2, 3, 0.01);
  inst.theta = TorusPoint::from_reals({0.1, 0.2});
  EXPECT_EQ(build_coloring(inst, 500).count_blue(), 0);
}

TEST(Construction, InconsistentInstances) {
  auto inst = random_instance(1, 4, 2, 3, 0.01);
  inst.radii.pop_back();
  EXPECT_THROW(build_coloring(inst, 10), InconsistentInstance);
  inst = random_instance(1, 4, 2, 3, 0.01);
  inst.radii[0] = 4;
  EXPECT_THROW(build_coloring(inst, 10), InconsistentInstance);
  inst = random_instance(1, 4, 2, 3, 0.01);
  inst.centers[2] = TorusPoint(3);
  EXPECT_THROW(build_coloring(inst, 10), InconsistentInstance);
}

TEST(Construction, ColoringMatchesNaiveMembership) {
  struct Case {
    std::size_t M;
    int D;
    std::int64_t K;
    double width;
  };
  // Large M with a small reach takes the grid path; the others scan linearly.
  for (const Case& c : {Case{8, 2, 4, 0.02}, Case{300, 2, 6, 0.005}, Case{100, 3, 5, 0.01}, Case{40, 1, 9, 0.001}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      for (auto variant : {RadiusVariant::kIndependent, RadiusVariant::kShared}) {
        auto inst = random_instance(seed, c.M, c.D, c.K, c.width);
        inst.variant = variant;
        const std::int64_t N = 3000;
        const auto colors = build_coloring(inst, N);
        std::int64_t blue = 0;
        for (std::int64_t n = 1; n <= N; ++n) {
          ASSERT_EQ(colors.is_blue(n), naive_blue(inst, n)) << "n=" << n;
          blue += colors.is_blue(n);
        }
        EXPECT_EQ(blue, colors.count_blue());
        EXPECT_EQ(colors, build_coloring(inst, N));
      }
    }
  }
}

TEST(Construction, VariantsAgreeForOneCenter) {
  auto inst = random_instance(4, 1, 2, 9, 0.03);
  const auto a = build_coloring(inst, 2000);
  inst.variant = RadiusVariant::kShared;
  EXPECT_EQ(a, build_coloring(inst, 2000));
}

TEST(Construction, BluePositionsSitInTheirBand) {
  auto inst = random_instance(8, 50, 2, 6, 0.01);
  const auto colors = build_coloring(inst, 5000);
  for (std::int64_t n = 1; n <= 5000; ++n) {
    if (!colors.is_blue(n)) continue;
    bool witnessed = false;
    for (std::size_t i = 0; i < inst.centers.size() && !witnessed; ++i) {
      const double r = std::sqrt(lift_euclidean_norm_sq(scalar_orbit_point(n, inst.theta), inst.centers[i]));
      const double lo = static_cast<double>(inst.radii[i]) * 0.01;
      witnessed = r >= lo * (1 - 1e-12) && r < (lo + 0.01) * (1 + 1e-12);
    }
    EXPECT_TRUE(witnessed) << n;
  }
}

TEST(Construction, CentersHit) {
  const auto theta = sample_theta(3, 5);
  std::vector<TorusPoint> centers = {scalar_orbit_point(4, theta), scalar_orbit_point(10, theta),
                                     scalar_orbit_point(7, theta) + TorusPoint::from_reals({0.001, 0, 0})};
  auto hits = count_centers_hit(theta, 3, 1, 5, centers, 0.0);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].center, 1);
  EXPECT_EQ(hits[0].position, 4);
  EXPECT_EQ(hits[0].distance, 0.0);
  EXPECT_EQ(hits[1].position, 10);
  hits = count_centers_hit(theta, 3, 1, 5, centers, 0.002);
  EXPECT_EQ(hits.size(), 3u);
}

TEST(Construction, CentersHitMatchesNaiveLoop) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto theta = sample_theta(2, seed);
    const auto centers = random_points(seed + 50, 80, 2);
    const double radius = 0.01 + 0.01 * static_cast<double>(seed);
    const std::int64_t d = 1 + static_cast<std::int64_t>(seed), n0 = 3, X = 400;
    const auto hits = count_centers_hit(theta, d, n0, X, centers, radius);
    std::vector<CenterHit> naive;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      for (std::int64_t t = 0; t < X; ++t) {
        const std::int64_t n = n0 + t * d;
        const double r2 = lift_euclidean_norm_sq(scalar_orbit_point(n, theta), centers[j]);
        if (r2 <= radius * radius) {
          naive.push_back({static_cast<std::int64_t>(j + 1), n, std::sqrt(r2)});
          break;
        }
      }
    }
    ASSERT_EQ(hits.size(), naive.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      EXPECT_EQ(hits[i].center, naive[i].center);
      EXPECT_EQ(hits[i].position, naive[i].position);
      EXPECT_EQ(hits[i].distance, naive[i].distance);
    }
  }
}

TEST(Construction, Condition2TrivialSubspace) {
  const auto centers = sample_centers(20, 4, 0.001, 1, 10);
  Condition2Options opt;
  opt.dim_max = 0;
  opt.trials = 5;
  opt.target_y = 20;
  for (const auto& t : spot_check_condition2(centers, 0.001, opt).trials) {
    EXPECT_EQ(t.count, 20);
    EXPECT_TRUE(t.meets_target);
  }
}

TEST(Construction, Condition2AnchorCenterCounts) {
  const auto centers = sample_centers(20, 4, 0.001, 2, 10);
  Condition2Options opt;
  opt.trials = 5;
  opt.x_star = centers[0];
  opt.dim_max = 2;
  for (const auto& t : spot_check_condition2(centers, 0.001, opt).trials) EXPECT_GE(t.count, 1);
}

TEST(Construction, Condition2FinerGridOracle) {
  const auto centers = sample_centers(64, 4, 0.002, 3, 50);
  Condition2Options coarse;
  coarse.dim_max = 1;
  coarse.xi_bound = 2;
  coarse.trials = 20;
  coarse.seed = 9;
  coarse.target_y = 4;
  Condition2Options fine = coarse;
  fine.u_divisions = 8;  // double resolution; contains every coarse grid point
  const auto a = spot_check_condition2(centers, 0.002, coarse);
  const auto b = spot_check_condition2(centers, 0.002, fine);
  ASSERT_EQ(a.trials.size(), 20u);
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    EXPECT_EQ(a.trials[t].generators, b.trials[t].generators);
    EXPECT_GE(b.trials[t].count, a.trials[t].count);
  }
}

TEST(Construction, InstanceJsonRoundTrip) {
  const auto p = make_desk_params(4, 4096, 64, 5, 1.0 / 4096, 0.0015, 64, 16);
  const auto inst = make_instance(p, 12, RadiusVariant::kShared);
  const auto back = instance_from_json(to_json(inst));
  EXPECT_EQ(back.theta, inst.theta);
  EXPECT_EQ(back.centers, inst.centers);
  EXPECT_EQ(back.radii, inst.radii);
  EXPECT_EQ(back.variant, inst.variant);
  EXPECT_EQ(back.params, inst.params);
  EXPECT_EQ(back.seed, 12u);
  EXPECT_EQ(build_coloring(back, 4096), build_coloring(inst, 4096));
}
