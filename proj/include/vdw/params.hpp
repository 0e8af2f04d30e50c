#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include "json.hpp"

namespace vdw {

/// 50 decimal digits (~166 bits) for paper-scale logarithms.
using LogReal = boost::multiprecision::cpp_bin_float_50;

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 100;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  LogReal to_log_real() const { return LogReal(num) / LogReal(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  static Rational parse(const std::string& text);
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class ScaleMode { kPaper, kDesk };

/// The scalar parameter schedule. Paper-scale sets carry only natural logs of
/// N, M, K, X, Y (the integers themselves are astronomically large); desk-scale
/// sets also carry concrete N, M, K.
struct ParameterSet {
  ScaleMode mode = ScaleMode::kDesk;
  int D = 0;
  Rational c{1, 100};
  std::int64_t C1 = 12;
  std::int64_t C2 = 9600;
  double rho = 0;
  double width = 0;

  LogReal logN = 0;
  LogReal logM = 0;
  LogReal logK = 0;
  LogReal logX = 0;
  LogReal logY = 0;
  LogReal log_rho = 0;
  LogReal log_width = 0;

  // Desk scale only.
  std::optional<std::int64_t> N;
  std::optional<std::int64_t> M;
  std::optional<std::int64_t> K;
  std::optional<double> X_target;
  std::optional<double> Y_target;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

ParameterSet derive_paper_schedule(int D, Rational c = {1, 100}, std::int64_t C1 = 12,
                                   std::int64_t C2 = 9600);

ParameterSet make_desk_params(int D, std::int64_t N, std::int64_t M, std::int64_t K, double width,
                              double rho, double X_target, double Y_target,
                              Rational c = {1, 100}, std::int64_t C1 = 12,
                              std::int64_t C2 = 9600);

struct OrderingReport {
  struct Entry {
    std::string name;
    LogReal log_value;
  };
  struct Comparison {
    std::string relation;
    bool holds = false;
  };
  std::vector<Entry> quantities;       // K, Y, M, rho^-D, X in that order
  std::vector<Comparison> inequalities;  // four adjacent strict inequalities
  bool chain_holds = false;
};

/// log K < log Y < log M < log rho^-D < log X; failures are reported, not thrown.
OrderingReport validate_ordering(const ParameterSet& p);

/// Radius r such that ||d theta|| > r for all d in [N] excludes blue 3-APs:
/// half the square root of the annulus width (1/2 N^{-2/D} at paper width).
double blue_gap_radius(const ParameterSet& p);

/// Run configuration: a parameter set plus the RNG seed.
struct RunConfig {
  ParameterSet params;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ParameterSet& p, std::optional<std::uint64_t> seed = std::nullopt);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Short stable digest of the canonical serialization.
std::string params_digest(const ParameterSet& p);

std::string to_decimal(const LogReal& v);

}  // namespace vdw
