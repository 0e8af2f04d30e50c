#include <gtest/gtest.h>

#include <cmath>

#include "vdw/errors.hpp"
#include "vdw/rng.hpp"
#include "vdw/torus.hpp"

using namespace vdw;

namespace {

TorusPoint random_point(CounterStream& s, std::size_t D) {
  TorusPoint x(D);
  for (std::size_t i = 0; i < D; ++i) x[i] = s.next();
  return x;
}

}  // namespace

TEST(Torus, LiftExamples) {
  EXPECT_EQ(lift(TorusPoint::from_reals({0.75})), std::vector<double>{-0.25});
  EXPECT_EQ(lift(TorusPoint::from_reals({0.5})), std::vector<double>{0.5});
  EXPECT_EQ(lift(TorusPoint::from_reals({0.25, 0.875})), (std::vector<double>{0.25, -0.125}));
}

TEST(Torus, SupNormExamples) {
  EXPECT_DOUBLE_EQ(torus_sup_norm(TorusPoint::from_reals({0.6, 0.1})), 0.4);
  EXPECT_EQ(torus_sup_norm(TorusPoint(3)), 0.0);
  EXPECT_EQ(torus_sup_norm(TorusPoint::from_reals({0.5, 0.25})), 0.5);
}

TEST(Torus, EuclideanExamples) {
  const TorusPoint origin(2);
  EXPECT_EQ(lift_euclidean_norm_sq(TorusPoint::from_reals({0.25, 0}), origin), 0.0625);
  const auto c = TorusPoint::from_reals({0.3, 0.7});
  EXPECT_EQ(lift_euclidean_norm_sq(c, c), 0.0);
  EXPECT_NEAR(lift_euclidean_norm_sq(TorusPoint::from_reals({0.9, 0.9}), origin), 0.02, 1e-15);
}

TEST(Torus, OrbitExamples) {
  const auto theta = TorusPoint::from_reals({0.25});
  EXPECT_EQ(scalar_orbit_point(3, theta), TorusPoint::from_reals({0.75}));
  EXPECT_EQ(scalar_orbit_point(4, theta), TorusPoint(1));
  const TorusPoint tiny(std::vector<std::uint64_t>{std::uint64_t{1} << 24});  // 2^-40
  EXPECT_EQ(scalar_orbit_point(std::int64_t{1} << 40, tiny), TorusPoint(1));
}

TEST(Torus, AnnulusExamples) {
  const AnnulusSpec a{0.1, 2, TorusPoint(2)};
  EXPECT_TRUE(annulus_contains(a, TorusPoint::from_reals({0.25, 0})));
  // The outer radius itself, as computed from width and index, is excluded.
  const double outer = 3 * 0.1;
  EXPECT_FALSE(annulus_contains(a, TorusPoint::from_reals({outer, 0})));
  EXPECT_FALSE(annulus_contains(a, TorusPoint::from_reals({0, -outer})));
  // ... and the inner radius is included.
  EXPECT_TRUE(annulus_contains(a, TorusPoint::from_reals({2 * 0.1, 0})));
  const AnnulusSpec ball{0.1, 0, TorusPoint::from_reals({0.4, 0.2})};
  EXPECT_TRUE(annulus_contains(ball, ball.center));
}

TEST(Torus, GroupLaws) {
  CounterStream s(1, StreamTag::kTest);
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_point(s, 5), y = random_point(s, 5), z = random_point(s, 5);
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ(x + TorusPoint(5), x);
    EXPECT_EQ(x - x, TorusPoint(5));
    EXPECT_EQ(-x + x, TorusPoint(5));
    const auto n = static_cast<std::int64_t>(s.below(1000)) - 500;
    EXPECT_EQ(n * x + x, (n + 1) * x);
  }
}

TEST(Torus, LiftInvertsProjection) {
  CounterStream s(2, StreamTag::kTest);
  for (int t = 0; t < 1000; ++t) {
    // Dyadic values in (-1/2, 1/2] are exact in both representations.
    std::vector<double> v(4);
    for (auto& c : v) c = (static_cast<double>(s.below(std::uint64_t{1} << 40)) - static_cast<double>(std::uint64_t{1} << 39) + 1) * 0x1p-40;
    EXPECT_EQ(lift(TorusPoint::from_reals(v)), v);
  }
}

TEST(Torus, SupNormIsMaxAbsLift) {
  CounterStream s(3, StreamTag::kTest);
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_point(s, 4);
    double m = 0;
    for (double c : lift(x)) m = std::max(m, std::abs(c));
    EXPECT_EQ(torus_sup_norm(x), m);
    EXPECT_LE(torus_sup_norm(x), 0.5);
  }
}

TEST(Torus, ParallelogramIdentity) {
  CounterStream s(4, StreamTag::kTest);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> u(4), v(4);
    for (auto& c : u) c = s.uniform() * 0.2 - 0.1;
    for (auto& c : v) c = s.uniform() * 0.2 - 0.1;
    double nu = 0, nv = 0, n1 = 0, n2 = 0;
    for (int i = 0; i < 4; ++i) {
      nu += u[i] * u[i];
      nv += v[i] * v[i];
      n1 += (u[i] + v[i]) * (u[i] + v[i]);
      n2 += (u[i] + 2 * v[i]) * (u[i] + 2 * v[i]);
    }
    EXPECT_NEAR(2 * nv, nu + n2 - 2 * n1, 1e-12 * (1 + nu + n2));
  }
}

TEST(Torus, DotProductIsExact) {
  const auto x = TorusPoint::from_reals({0.5, 0.25});
  const std::int64_t xi[] = {1, 4};
  EXPECT_EQ(dot_mod1(xi, x), std::uint64_t{1} << 63);
  const std::int64_t neg[] = {-3, 2};
  EXPECT_EQ(dot_mod1(neg, x), std::uint64_t{0});
}

TEST(Torus, HexRoundTrip) {
  CounterStream s(5, StreamTag::kTest);
  const auto x = random_point(s, 3);
  const auto text = to_hex(x);
  EXPECT_EQ(text.size(), 3 * 16 + 2);
  EXPECT_EQ(torus_point_from_hex(text), x);
  EXPECT_EQ(to_hex(TorusPoint::from_reals({0.5})), "8000000000000000");
  EXPECT_THROW(torus_point_from_hex("xyz"), ConfigError);
}
