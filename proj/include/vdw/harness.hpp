#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vdw/ap_verification.hpp"
#include "vdw/color_array.hpp"
#include "vdw/construction.hpp"
#include "vdw/params.hpp"

namespace vdw {

struct TrialOptions {
  RadiusVariant variant = RadiusVariant::kIndependent;
  int max_retries = 100;
  /// Number of random APs whose center hits (within rho/5) are reported.
  int ap_samples = 4;
  /// Debug hook: replace the sampled theta by 0.
  bool force_theta_zero = false;
};

struct SampledAp {
  std::int64_t n0 = 0;
  std::int64_t d = 0;
  std::int64_t length = 0;
  std::int64_t centers_hit = 0;
};

struct TrialReport {
  std::uint64_t seed = 0;
  std::string params_digest;
  std::int64_t N = 0;
  GapCheck theta_gap;
  std::optional<ApWitness> blue;
  ApWitness longest_red;
  std::vector<SampledAp> sampled_aps;
  double wall_ms = 0;
};

/// Samples an instance from (params, seed), colors [N] and runs every check.
TrialReport run_trial(const ParameterSet& params, std::uint64_t seed, const TrialOptions& options = {});

/// The coloring run_trial(params, seed, options) examined.
ColorArray regenerate_coloring(const ParameterSet& params, std::uint64_t seed, const TrialOptions& options = {});

/// Wall time is excluded unless asked for, so equal inputs give equal documents.
nlohmann::json to_json(const TrialReport& report, bool include_wall_time = false);

struct MissConfig {
  int D = 4;
  std::int64_t K = 7;
  std::int64_t Y = 30;
  std::int64_t draws = 100'000;
  double rho = 0.05;
  std::uint64_t seed = 0;
  int max_retries = 50;
};

struct MissResult {
  std::int64_t draws = 0;
  std::int64_t misses = 0;
  double empirical = 0;
  double predicted = 0;  // (1 - 1/(K+1))^Y
  double sigma = 0;      // binomial standard deviation of the empirical fraction
  bool within_3_sigma = false;
  std::int64_t planted_hits = 0;  // centers within rho/5 of the planted AP
  bool isolated = false;          // each center sees exactly one annulus index
};

/// Plants Y centers within rho/5 of consecutive orbit points, then redraws the
/// annulus indices `draws` times and counts draws in which no orbit point lies
/// in its center's annulus.
MissResult run_miss_experiment(const MissConfig& config);

struct ExperimentOptions {
  TrialOptions trial;
  std::optional<std::string> csv_path;
  std::optional<MissConfig> miss;
};

struct ExperimentSummary {
  std::int64_t trials = 0;
  std::int64_t gap_pass = 0;
  std::int64_t blue_free = 0;
  /// Trials whose theta passed the gap check yet whose coloring has a blue 3-AP.
  std::int64_t gap_pass_with_blue = 0;
  double blue_free_rate = 0;
  std::int64_t red_min = 0;
  std::int64_t red_median = 0;  // lower median
  std::int64_t red_max = 0;
  std::optional<MissResult> miss;
  std::optional<std::string> csv_path;
  std::vector<TrialReport> reports;
};

/// Trials use seeds base_seed .. base_seed + n_trials - 1.
ExperimentSummary run_experiment(const ParameterSet& params, std::int64_t n_trials, std::uint64_t base_seed,
                                 const ExperimentOptions& options = {});

/// Aggregates (everything but the miss experiment) from trial reports.
ExperimentSummary summarize(std::vector<TrialReport> reports);

/// Columns trial,seed,theta_gap,blue_witness,longest_red_len,longest_red_d,wall_ms.
void write_experiment_csv(std::ostream& out, const std::vector<TrialReport>& reports);

nlohmann::json to_json(const ExperimentSummary& summary);
nlohmann::json to_json(const MissResult& miss);

struct W3Result {
  std::int64_t k = 0;
  std::int64_t w = 0;         // least N with no valid coloring of [N]
  ColorArray certificate;     // valid coloring of [w - 1]
  std::uint64_t nodes = 0;
};

/// Exhaustive depth-first search, red tried first. Throws CapExceeded when a
/// valid coloring of [N_limit] exists.
W3Result brute_force_w3(std::int64_t k, std::int64_t N_limit = 256);

struct Certificate {
  ColorArray colors;
  std::int64_t k = 0;
};

/// "VDW3 v1 N=<N> k=<k>\n" followed by N characters over {B, R} and "\n".
std::string format_certificate(const ColorArray& colors, std::int64_t k);
Certificate parse_certificate(const std::string& text);
void save_certificate(const ColorArray& colors, std::int64_t k, const std::string& path);
Certificate load_certificate(const std::string& path);

}  // namespace vdw
