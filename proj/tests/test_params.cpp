#include <gtest/gtest.h>

#include "vdw/errors.hpp"
#include "vdw/params.hpp"

using namespace vdw;

namespace {

// ln 10 to 60 digits, a constant independent of the library's log routine.
const LogReal kLn10("2.302585092994045684017991454684364207601101488628772976033327");

ParameterSet default_desk() { return make_desk_params(4, 4096, 64, 7, 0.004, 0.05, 64, 16); }

}  // namespace

TEST(Params, PaperScheduleRhoAtD10) {
  const auto p = derive_paper_schedule(10, {1, 100}, 12, 9600);
  // rho = D^-4.
  EXPECT_NEAR(static_cast<double>(exp(p.log_rho)), 1e-4, 1e-18);
}

TEST(Params, PaperScheduleLogNAtD10) {
  const auto p = derive_paper_schedule(10, {1, 100}, 12, 9600);
  const LogReal expected = kLn10 / 2;
  EXPECT_LT(abs(p.logN - expected), LogReal("1e-45"));
  EXPECT_NEAR(static_cast<double>(p.logN), 1.1513, 1e-4);
}

TEST(Params, PaperScheduleRejectsSmallC1) {
  EXPECT_THROW(derive_paper_schedule(10, {1, 100}, 11, 9600), ConstraintViolation);
  EXPECT_THROW(derive_paper_schedule(10, {1, 100}, 12, 9599), ConstraintViolation);
  EXPECT_THROW(derive_paper_schedule(10, {1, 1}, 12, 9600), ConstraintViolation);
}

TEST(Params, PaperScheduleAtD100HasFullChain) {
  const auto r = validate_ordering(derive_paper_schedule(100));
  ASSERT_EQ(r.inequalities.size(), 4u);
  for (const auto& c : r.inequalities) EXPECT_TRUE(c.holds) << c.relation;
  EXPECT_TRUE(r.chain_holds);

  // Independent evaluation of the five logs at D = 100, c = 1/100, C2 = 9600.
  const LogReal lnD = 2 * kLn10;
  const LogReal logN = LogReal(1) / 100 * 100 * 100 / 2 * lnD;
  const LogReal log_rho = -4 * lnD;
  const LogReal expected[] = {log_rho + LogReal(4) / 100 * logN, LogReal(1) / 100 * 100 * (-log_rho),
                              (LogReal(1) / 4 + LogReal(1) / 100) * 100 * (-log_rho), -100 * log_rho,
                              LogReal(100) * (9600 + 2) / 100 * logN};
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_LT(abs(r.quantities[i].log_value - expected[i]), LogReal("1e-40")) << r.quantities[i].name;
}

TEST(Params, ChainHoldsForLargeD) {
  for (int D = 64; D <= 400; D += 7) EXPECT_TRUE(validate_ordering(derive_paper_schedule(D)).chain_holds) << D;
}

TEST(Params, SmallDReportIsProduced) {
  const auto r = validate_ordering(derive_paper_schedule(10));
  EXPECT_EQ(r.quantities.size(), 5u);
  EXPECT_EQ(r.inequalities.size(), 4u);
}

TEST(Params, DeskKAboveYFailsFirstInequality) {
  const auto p = make_desk_params(4, 4096, 64, 10, 0.004, 0.05, 64, 5);
  const auto r = validate_ordering(p);
  EXPECT_FALSE(r.inequalities[0].holds);
  EXPECT_EQ(r.inequalities[0].relation, "log K < log Y");
  EXPECT_FALSE(r.chain_holds);
}

TEST(Params, DeskConstraints) {
  EXPECT_NO_THROW(default_desk());
  try {
    make_desk_params(4, 4096, 64, 20, 0.004, 0.05, 64, 16);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("(K+1)*width <= rho"), std::string::npos);
  }
  try {
    make_desk_params(4, 4096, 64, 7, 0.004, 0.2, 64, 16);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("rho <= 1/12"), std::string::npos);
  }
  EXPECT_THROW(make_desk_params(4, 2, 64, 7, 0.004, 0.05, 64, 16), ConstraintViolation);
}

TEST(Params, ScheduleIsDeterministic) {
  EXPECT_EQ(derive_paper_schedule(37), derive_paper_schedule(37));
  EXPECT_EQ(to_json(derive_paper_schedule(37)).dump(), to_json(derive_paper_schedule(37)).dump());
}

TEST(Params, JsonRoundTrip) {
  for (const auto& p : {default_desk(), derive_paper_schedule(100), derive_paper_schedule(12, {3, 1000}, 13, 20000)}) {
    const auto cfg = run_config_from_json(to_json(p, 42));
    EXPECT_EQ(cfg.params, p);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(params_digest(cfg.params), params_digest(p));
  }
}

TEST(Params, JsonRejectsUnknownKeysAndTampering) {
  auto j = to_json(default_desk());
  j["colour"] = 1;
  EXPECT_THROW(run_config_from_json(j), ConfigError);

  auto paper = to_json(derive_paper_schedule(100));
  paper["N"] = {{"ln", "230.25"}};
  EXPECT_THROW(run_config_from_json(paper), ConfigError);
}

TEST(Params, RationalParsing) {
  EXPECT_EQ(Rational::parse("1/100"), (Rational{1, 100}));
  EXPECT_EQ(Rational::parse("0.01"), (Rational{1, 100}));
  EXPECT_THROW(Rational::parse("x"), ConfigError);
}

TEST(Params, BlueGapRadiusMatchesPaperWidth) {
  // width = N^{-4/D} gives 1/2 N^{-2/D}.
  const auto p = make_desk_params(4, 4096, 64, 5, 1.0 / 4096, 0.0015, 64, 16);
  EXPECT_DOUBLE_EQ(blue_gap_radius(p), 0.5 / 64);
}
