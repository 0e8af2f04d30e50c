#include "vdw/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "vdw/errors.hpp"
#include "vdw/parallel.hpp"
#include "vdw/rng.hpp"

namespace vdw {

namespace {

ColoringInstance trial_instance(const ParameterSet& params, std::uint64_t seed, const TrialOptions& options) {
  if (params.mode != ScaleMode::kDesk || !params.N) throw ConfigError("trials need a desk-scale configuration");
  ColoringInstance inst = make_instance(params, seed, options.variant, options.max_retries);
  if (options.force_theta_zero) inst.theta = TorusPoint(inst.theta.dim());
  return inst;
}

}  // namespace

ColorArray regenerate_coloring(const ParameterSet& params, std::uint64_t seed, const TrialOptions& options) {
  return build_coloring(trial_instance(params, seed, options), *params.N);
}

TrialReport run_trial(const ParameterSet& params, std::uint64_t seed, const TrialOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const ColoringInstance inst = trial_instance(params, seed, options);
  const std::int64_t N = *params.N;
  const ColorArray colors = build_coloring(inst, N);

  TrialReport r;
  r.seed = seed;
  r.params_digest = params_digest(params);
  r.N = N;
  r.theta_gap = theta_gap_check(inst.theta, N, blue_gap_radius(params));
  r.blue = find_blue_3ap(colors);
  r.longest_red = longest_red_ap(colors);

  const std::int64_t target = params.X_target ? static_cast<std::int64_t>(std::llround(*params.X_target)) : 64;
  const std::int64_t L = std::clamp<std::int64_t>(target, 1, N);
  CounterStream stream(seed, StreamTag::kApSample);
  for (int s = 0; s < options.ap_samples && N >= 1; ++s) {
    const std::int64_t d_max = L > 1 ? std::max<std::int64_t>(1, (N - 1) / (L - 1)) : N;
    const auto d = 1 + static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(d_max)));
    const std::int64_t span = (L - 1) * d;
    const auto n0 = 1 + static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(std::max<std::int64_t>(1, N - span))));
    const auto hits = count_centers_hit(inst.theta, d, n0, L, inst.centers, params.rho / 5);
    r.sampled_aps.push_back({n0, d, L, static_cast<std::int64_t>(hits.size())});
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

nlohmann::json witness_json(const ApWitness& w) {
  return {{"n", w.n}, {"d", w.d}, {"length", w.length}, {"color", w.color == Color::kBlue ? "blue" : "red"}};
}

}  // namespace

nlohmann::json to_json(const TrialReport& report, bool include_wall_time) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["params_digest"] = report.params_digest;
  j["N"] = report.N;
  j["theta_gap"] = {{"pass", report.theta_gap.pass},
                    {"argmin_d", report.theta_gap.argmin_d},
                    {"min_norm", report.theta_gap.min_norm},
                    {"radius", report.theta_gap.radius}};
  j["blue_3ap"] = report.blue ? witness_json(*report.blue) : nlohmann::json(nullptr);
  j["longest_red_ap"] = witness_json(report.longest_red);
  auto& aps = j["sampled_aps"] = nlohmann::json::array();
  for (const auto& ap : report.sampled_aps)
    aps.push_back({{"n0", ap.n0}, {"d", ap.d}, {"length", ap.length}, {"centers_hit", ap.centers_hit}});
  if (include_wall_time) j["wall_ms"] = report.wall_ms;
  return j;
}

MissResult run_miss_experiment(const MissConfig& config) {
  if (config.K < 0 || config.Y < 0 || config.draws < 1 || config.D < 1)
    throw ConstraintViolation("miss experiment needs K >= 0, Y >= 0, draws >= 1, D >= 1");
  MissResult out;
  out.draws = config.draws;
  out.predicted = std::pow(1.0 - 1.0 / static_cast<double>(config.K + 1), static_cast<double>(config.Y));
  const double width = config.rho / static_cast<double>(config.K + 1);
  const auto Y = static_cast<std::size_t>(config.Y);
  const auto D = static_cast<std::size_t>(config.D);

  // bands[j]: annulus indices around center j met by some planted AP point.
  std::vector<std::vector<std::int64_t>> bands;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    CounterStream stream(config.seed, StreamTag::kMissProbability, static_cast<std::uint64_t>(attempt) + 1);
    TorusPoint theta(D);
    for (std::size_t i = 0; i < D; ++i) theta[i] = stream.next();
    std::vector<TorusPoint> centers;
    // Offsets inside the cube of half-side (rho/5)/sqrt(D) have Euclidean norm < rho/5.
    const double half = config.rho / 5 / std::sqrt(static_cast<double>(D)) * (1 - 1e-9);
    for (std::size_t j = 0; j < Y; ++j) {
      std::vector<double> offset(D);
      for (auto& v : offset) v = (2 * stream.uniform() - 1) * half;
      centers.push_back(scalar_orbit_point(static_cast<std::int64_t>(j) + 1, theta) + TorusPoint::from_reals(offset));
    }
    out.planted_hits = Y ? static_cast<std::int64_t>(count_centers_hit(theta, 1, 1, config.Y, centers, config.rho / 5).size()) : 0;

    bands.assign(Y, {});
    bool isolated = true;
    for (std::size_t j = 0; j < Y; ++j) {
      for (std::size_t t = 0; t < Y; ++t) {
        const double r2 = lift_euclidean_norm_sq(scalar_orbit_point(static_cast<std::int64_t>(t) + 1, theta), centers[j]);
        for (std::int64_t e = 0; e <= config.K; ++e)
          if (in_annulus_band(r2, e, width)) bands[j].push_back(e);
      }
      isolated = isolated && bands[j].size() == 1;
    }
    out.isolated = isolated;
    if (isolated && out.planted_hits == config.Y) break;
  }

  CounterStream draws(config.seed, StreamTag::kMissProbability, 0);
  for (std::int64_t t = 0; t < config.draws; ++t) {
    bool miss = true;
    for (std::size_t j = 0; j < Y; ++j) {
      const auto e = static_cast<std::int64_t>(draws.below(static_cast<std::uint64_t>(config.K) + 1));
      if (std::find(bands[j].begin(), bands[j].end(), e) != bands[j].end()) miss = false;
    }
    out.misses += miss ? 1 : 0;
  }
  out.empirical = static_cast<double>(out.misses) / static_cast<double>(out.draws);
  out.sigma = std::sqrt(out.predicted * (1 - out.predicted) / static_cast<double>(out.draws));
  out.within_3_sigma = std::abs(out.empirical - out.predicted) <= 3 * out.sigma;
  return out;
}

ExperimentSummary summarize(std::vector<TrialReport> reports) {
  ExperimentSummary s;
  s.trials = static_cast<std::int64_t>(reports.size());
  std::vector<std::int64_t> lengths;
  for (const auto& r : reports) {
    s.gap_pass += r.theta_gap.pass ? 1 : 0;
    s.blue_free += r.blue ? 0 : 1;
    s.gap_pass_with_blue += (r.theta_gap.pass && r.blue) ? 1 : 0;
    lengths.push_back(r.longest_red.length);
  }
  if (!lengths.empty()) {
    std::sort(lengths.begin(), lengths.end());
    s.red_min = lengths.front();
    s.red_max = lengths.back();
    s.red_median = lengths[(lengths.size() - 1) / 2];
    s.blue_free_rate = static_cast<double>(s.blue_free) / static_cast<double>(s.trials);
  }
  s.reports = std::move(reports);
  return s;
}

void write_experiment_csv(std::ostream& out, const std::vector<TrialReport>& reports) {
  out << "trial,seed,theta_gap,blue_witness,longest_red_len,longest_red_d,wall_ms\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << i << ',' << r.seed << ',' << (r.theta_gap.pass ? "pass" : "fail") << ',';
    if (r.blue) {
      out << r.blue->n << ':' << r.blue->d;
    } else {
      out << "none";
    }
    out << ',' << r.longest_red.length << ',' << r.longest_red.d << ',' << r.wall_ms << '\n';
  }
}

ExperimentSummary run_experiment(const ParameterSet& params, std::int64_t n_trials, std::uint64_t base_seed,
                                 const ExperimentOptions& options) {
  if (n_trials < 1) throw ConstraintViolation("n_trials must be >= 1");
  std::vector<TrialReport> reports(static_cast<std::size_t>(n_trials));
  parallel_for(n_trials, [&](std::int64_t i) {
    reports[static_cast<std::size_t>(i)] = run_trial(params, base_seed + static_cast<std::uint64_t>(i), options.trial);
  });
  ExperimentSummary s = summarize(std::move(reports));
  if (options.csv_path) {
    std::ofstream out(*options.csv_path);
    if (!out) throw Error("cannot open " + *options.csv_path + " for writing");
    write_experiment_csv(out, s.reports);
    if (!out) throw Error("write failed: " + *options.csv_path);
    s.csv_path = options.csv_path;
  }
  if (options.miss) s.miss = run_miss_experiment(*options.miss);
  return s;
}

nlohmann::json to_json(const MissResult& miss) {
  return {{"draws", miss.draws},         {"misses", miss.misses},
          {"empirical", miss.empirical}, {"predicted", miss.predicted},
          {"sigma", miss.sigma},         {"within_3_sigma", miss.within_3_sigma},
          {"planted_hits", miss.planted_hits}, {"isolated", miss.isolated}};
}

nlohmann::json to_json(const ExperimentSummary& summary) {
  nlohmann::json j;
  j["trials"] = summary.trials;
  j["theta_gap_pass"] = summary.gap_pass;
  j["blue_free"] = summary.blue_free;
  j["blue_free_rate"] = summary.blue_free_rate;
  j["gap_pass_with_blue"] = summary.gap_pass_with_blue;
  j["longest_red"] = {{"min", summary.red_min}, {"median", summary.red_median}, {"max", summary.red_max}};
  j["miss"] = summary.miss ? to_json(*summary.miss) : nlohmann::json(nullptr);
  j["csv"] = summary.csv_path ? nlohmann::json(*summary.csv_path) : nlohmann::json(nullptr);
  return j;
}

namespace {

// Depth-first search over colorings of [1..], one position at a time.
class W3Search {
 public:
  W3Search(std::int64_t k, std::int64_t limit) : k_(k), limit_(limit), blue_(static_cast<std::size_t>(limit) + 1, 0) {}

  void run() { extend(1); }

  std::int64_t best_length = 0;
  std::vector<char> best;
  std::uint64_t nodes = 0;

 private:
  // Would coloring position p (1-based) this color close a forbidden AP ending at p?
  bool closes_blue(std::int64_t p) const {
    for (std::int64_t d = 1; p - 2 * d >= 1; ++d)
      if (blue_[static_cast<std::size_t>(p - d)] && blue_[static_cast<std::size_t>(p - 2 * d)]) return true;
    return false;
  }
  bool closes_red(std::int64_t p) const {
    for (std::int64_t d = 1; p - (k_ - 1) * d >= 1; ++d) {
      bool all_red = true;
      for (std::int64_t t = 1; t < k_ && all_red; ++t) all_red = !blue_[static_cast<std::size_t>(p - t * d)];
      if (all_red) return true;
    }
    return false;
  }

  void extend(std::int64_t p) {
    ++nodes;
    if (p - 1 > best_length) {
      best_length = p - 1;
      best.assign(blue_.begin() + 1, blue_.begin() + p);
      if (best_length >= limit_) throw CapExceeded("valid coloring of [N_limit] exists; raise N_limit");
    }
    if (!closes_red(p)) {
      blue_[static_cast<std::size_t>(p)] = 0;
      extend(p + 1);
    }
    if (!closes_blue(p)) {
      blue_[static_cast<std::size_t>(p)] = 1;
      extend(p + 1);
      blue_[static_cast<std::size_t>(p)] = 0;
    }
  }

  std::int64_t k_;
  std::int64_t limit_;
  std::vector<char> blue_;
};

}  // namespace

W3Result brute_force_w3(std::int64_t k, std::int64_t N_limit) {
  if (k < 3) throw ConstraintViolation("brute_force_w3 needs k >= 3");
  if (N_limit < k) throw ConstraintViolation("N_limit must be >= k");
  W3Search search(k, N_limit);
  search.run();
  W3Result r;
  r.k = k;
  r.w = search.best_length + 1;
  r.nodes = search.nodes;
  r.certificate = ColorArray(search.best_length);
  for (std::int64_t i = 0; i < search.best_length; ++i)
    if (search.best[static_cast<std::size_t>(i)]) r.certificate.set_blue(i + 1);
  return r;
}

std::string format_certificate(const ColorArray& colors, std::int64_t k) {
  return "VDW3 v1 N=" + std::to_string(colors.size()) + " k=" + std::to_string(k) + "\n" + colors.to_string() + "\n";
}

Certificate parse_certificate(const std::string& text) {
  const auto eol = text.find('\n');
  if (eol == std::string::npos) throw CertificateError("malformed header: no line break");
  static const std::regex header(R"(VDW3 v1 N=(0|[1-9][0-9]{0,17}) k=(0|[1-9][0-9]{0,17}))");
  std::smatch m;
  const std::string first = text.substr(0, eol);
  if (!std::regex_match(first, m, header)) throw CertificateError("malformed header: " + first);
  const std::int64_t N = std::stoll(m[1].str());
  const std::int64_t k = std::stoll(m[2].str());

  const std::string rest = text.substr(eol + 1);
  if (rest.empty() || rest.back() != '\n') throw CertificateError("missing trailing newline");
  const std::string body = rest.substr(0, rest.size() - 1);
  if (body.find('\n') != std::string::npos) throw CertificateError("unexpected extra lines");
  if (static_cast<std::int64_t>(body.size()) != N)
    throw CertificateError("length mismatch: header N=" + std::to_string(N) + ", found " + std::to_string(body.size()) +
                           " colors");
  return Certificate{ColorArray::from_string(body), k};
}

void save_certificate(const ColorArray& colors, std::int64_t k, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << format_certificate(colors, k);
  if (!out) throw Error("write failed: " + path);
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CertificateError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_certificate(buf.str());
}

}  // namespace vdw
