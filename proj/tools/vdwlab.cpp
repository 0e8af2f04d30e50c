// Command-line front end: one subcommand per module.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vdw/ap_verification.hpp"
#include "vdw/construction.hpp"
#include "vdw/diophantine.hpp"
#include "vdw/errors.hpp"
#include "vdw/fourier_kernels.hpp"
#include "vdw/harness.hpp"
#include "vdw/lattice.hpp"
#include "vdw/params.hpp"
#include "vdw/rng.hpp"

using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON configuration file");
  c.seed_opt = cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--out", c.out, "output path (default: stdout)");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vdw::ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw vdw::ConfigError("parse error in " + path + ": " + e.what());
  }
}

// Knob files for the non-parameter subcommands: a key fills the matching
// option unless the option was given on the command line.
class Knobs {
 public:
  explicit Knobs(const std::string& path) : j_(path.empty() ? json::object() : read_json(path)) {}

  template <typename T>
  void fill(const char* key, CLI::Option* opt, T& value) const {
    if (opt->count() == 0 && j_.contains(key)) value = j_.at(key).get<T>();
  }

 private:
  json j_;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw vdw::Error("cannot open " + path + " for writing");
  out << text;
}

vdw::RunConfig run_config(const Common& c) {
  if (c.config.empty()) throw vdw::ConfigError("--config is required");
  vdw::RunConfig cfg = vdw::load_run_config(c.config);
  if (c.seed_opt->count()) cfg.seed = c.seed;
  return cfg;
}

json ordering_json(const vdw::OrderingReport& r) {
  json j;
  for (const auto& q : r.quantities) j["log"][q.name] = vdw::to_decimal(q.log_value);
  for (const auto& c : r.inequalities) j["inequalities"].push_back({{"relation", c.relation}, {"holds", c.holds}});
  j["chain_holds"] = r.chain_holds;
  return j;
}

vdw::IntMatrix parse_vectors(const std::string& text) {
  // "1,1;0,2" -> two rows.
  vdw::IntMatrix rows;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    vdw::IntVec v;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) v.emplace_back(std::stoll(cell));
    if (!v.empty()) rows.push_back(std::move(v));
  }
  return rows;
}

json big_vectors(const vdw::IntMatrix& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json v = json::array();
    for (const auto& x : r) v.push_back(x.str());
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized torus-annulus colorings and their checks"};
  app.require_subcommand(1);

  // params derive | validate
  auto* params = app.add_subcommand("params", "parameter schedules");
  params->require_subcommand(1);
  Common derive_c, validate_c;
  int derive_D = 100;
  std::string derive_cval = "1/100";
  std::int64_t derive_C1 = 12, derive_C2 = 9600;
  auto* derive = params->add_subcommand("derive", "paper-scale schedule for D");
  add_common(derive, derive_c);
  auto* o_D = derive->add_option("--D", derive_D, "dimension");
  auto* o_c = derive->add_option("--c", derive_cval, "constant c as p/q or decimal");
  auto* o_C1 = derive->add_option("--C1", derive_C1);
  auto* o_C2 = derive->add_option("--C2", derive_C2);
  auto* validate = params->add_subcommand("validate", "check a configuration file");
  add_common(validate, validate_c);

  Common construct_c;
  std::string colors_path;
  bool shared = false;
  auto* construct = app.add_subcommand("construct", "sample an instance and color [N]");
  add_common(construct, construct_c);
  construct->add_option("--colors", colors_path, "also write the coloring as a certificate file");
  construct->add_flag("--shared-radius", shared, "use one annulus index for every center");

  Common verify_c;
  std::string certificate;
  auto* verify = app.add_subcommand("verify", "verify a certificate, or run one trial from a config");
  add_common(verify, verify_c);
  verify->add_option("--certificate", certificate, "certificate file");

  Common exp_c;
  std::int64_t trials = 100;
  std::int64_t miss_K = -1, miss_Y = 30, miss_draws = 100000;
  auto* experiment = app.add_subcommand("experiment", "run seeded trials; --out receives the CSV");
  add_common(experiment, exp_c);
  experiment->add_option("--trials", trials);
  experiment->add_option("--miss-K", miss_K, "run the miss-probability experiment with this K");
  experiment->add_option("--miss-Y", miss_Y);
  experiment->add_option("--miss-draws", miss_draws);

  Common dio_c;
  int dio_D = 4;
  std::int64_t dio_B = 3, dio_N = 4096, dio_trials = 200;
  double dio_eps = 0.02;
  std::size_t dio_rank = 2;
  auto* dio = app.add_subcommand("diophantine", "Monte Carlo measure of the diophantine set; --out receives the CSV");
  add_common(dio, dio_c);
  auto* o_dD = dio->add_option("--D", dio_D);
  auto* o_dB = dio->add_option("--B", dio_B, "frequency box |xi| < B");
  auto* o_de = dio->add_option("--eps", dio_eps);
  auto* o_dr = dio->add_option("--rank-max", dio_rank);
  auto* o_dN = dio->add_option("--N", dio_N);
  auto* o_dt = dio->add_option("--trials", dio_trials);

  Common ker_c;
  double fejer_X = 10;
  int chi_D = 4;
  std::int64_t chi_k = 200;
  double chi_s = 0.5;
  auto* kernels = app.add_subcommand("kernels", "verify both kernels and print JSON reports");
  add_common(kernels, ker_c);
  auto* o_X = kernels->add_option("--fejer-X", fejer_X);
  auto* o_cD = kernels->add_option("--chi-D", chi_D);
  auto* o_ck = kernels->add_option("--chi-k", chi_k);
  auto* o_cs = kernels->add_option("--chi-s", chi_s);

  Common lat_c;
  std::string generators = "1,1";
  std::int64_t Q = 2;
  auto* lattice = app.add_subcommand("lattice", "bounded points, short basis and coefficient certificates");
  add_common(lattice, lat_c);
  auto* o_g = lattice->add_option("--generators", generators, "rows separated by ';', entries by ','");
  auto* o_Q = lattice->add_option("--Q", Q);

  Common ora_c;
  std::int64_t ora_k = 3, ora_limit = 256;
  auto* oracle = app.add_subcommand("oracle", "exact w(3,k) by exhaustive search; --out receives the certificate");
  add_common(oracle, ora_c);
  auto* o_k = oracle->add_option("--k", ora_k);
  auto* o_l = oracle->add_option("--limit", ora_limit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (derive->parsed()) {
      const Knobs k(derive_c.config);
      k.fill("D", o_D, derive_D);
      k.fill("c", o_c, derive_cval);
      k.fill("C1", o_C1, derive_C1);
      k.fill("C2", o_C2, derive_C2);
      const auto p = vdw::derive_paper_schedule(derive_D, vdw::Rational::parse(derive_cval), derive_C1, derive_C2);
      json j = vdw::to_json(p);
      j["ordering"] = ordering_json(vdw::validate_ordering(p));
      emit(derive_c.out, j.dump(2) + "\n");
    } else if (validate->parsed()) {
      const auto cfg = run_config(validate_c);
      json j = vdw::to_json(cfg.params, cfg.seed);
      j["digest"] = vdw::params_digest(cfg.params);
      j["ordering"] = ordering_json(vdw::validate_ordering(cfg.params));
      emit(validate_c.out, j.dump(2) + "\n");
    } else if (construct->parsed()) {
      const auto cfg = run_config(construct_c);
      const auto inst = vdw::make_instance(cfg.params, cfg.seed,
                                           shared ? vdw::RadiusVariant::kShared : vdw::RadiusVariant::kIndependent);
      const auto colors = vdw::build_coloring(inst, *cfg.params.N);
      json j = vdw::to_json(inst);
      j["blue_count"] = colors.count_blue();
      emit(construct_c.out, j.dump(2) + "\n");
      if (!colors_path.empty()) vdw::save_certificate(colors, 3, colors_path);
    } else if (verify->parsed()) {
      if (!certificate.empty()) {
        const auto cert = vdw::load_certificate(certificate);
        const auto v = vdw::verify_certificate(cert.colors, cert.k);
        json j{{"N", cert.colors.size()}, {"k", cert.k}, {"accept", v.accept}, {"reason", v.reason}};
        emit(verify_c.out, j.dump(2) + "\n");
        return v.accept ? 0 : 1;
      }
      const auto cfg = run_config(verify_c);
      emit(verify_c.out, vdw::to_json(vdw::run_trial(cfg.params, cfg.seed), true).dump(2) + "\n");
    } else if (experiment->parsed()) {
      const auto cfg = run_config(exp_c);
      vdw::ExperimentOptions opts;
      if (!exp_c.out.empty()) opts.csv_path = exp_c.out;
      if (miss_K >= 0) {
        vdw::MissConfig m;
        m.D = cfg.params.D;
        m.K = miss_K;
        m.Y = miss_Y;
        m.draws = miss_draws;
        m.rho = cfg.params.rho;
        m.seed = cfg.seed;
        opts.miss = m;
      }
      std::cout << vdw::to_json(vdw::run_experiment(cfg.params, trials, cfg.seed, opts)).dump(2) << "\n";
    } else if (dio->parsed()) {
      const Knobs k(dio_c.config);
      k.fill("D", o_dD, dio_D);
      k.fill("B", o_dB, dio_B);
      k.fill("eps", o_de, dio_eps);
      k.fill("rank_max", o_dr, dio_rank);
      k.fill("N", o_dN, dio_N);
      k.fill("trials", o_dt, dio_trials);
      k.fill("seed", dio_c.seed_opt, dio_c.seed);
      const auto range = vdw::NRange::standard(dio_N);
      const auto est = vdw::measure_estimate(dio_D, range, dio_B, dio_eps, dio_rank, dio_trials, dio_c.seed);
      if (!dio_c.out.empty()) {
        std::ofstream out(dio_c.out);
        if (!out) throw vdw::Error("cannot open " + dio_c.out + " for writing");
        vdw::write_measure_csv(out, est);
      }
      json j{{"knobs", {{"D", dio_D}, {"B", dio_B}, {"eps", dio_eps}, {"rank_max", dio_rank}, {"N", dio_N}}},
             {"n_values", range.values.size()},
             {"trials", est.trials},
             {"in_theta", est.in_theta},
             {"fraction", est.fraction},
             {"ci95", {est.ci_low, est.ci_high}},
             {"comparison_1_minus_1_over_N", est.comparison},
             {"union_bound", est.union_bound},
             {"union_bound_fraction", est.union_bound_fraction}};
      std::cout << j.dump(2) << "\n";
    } else if (kernels->parsed()) {
      const Knobs k(ker_c.config);
      k.fill("fejer_X", o_X, fejer_X);
      k.fill("chi_D", o_cD, chi_D);
      k.fill("chi_k", o_ck, chi_k);
      k.fill("chi_s", o_cs, chi_s);
      k.fill("seed", ker_c.seed_opt, ker_c.seed);
      const auto fejer = vdw::make_fejer(fejer_X);
      std::vector<double> betas;
      vdw::CounterStream stream(ker_c.seed, vdw::StreamTag::kKernelSamples, 10);
      for (int i = 0; i < 10000; ++i) betas.push_back(stream.uniform());
      json j;
      j["fejer"] = vdw::to_json(vdw::verify_fejer_properties(fejer, betas));
      try {
        const auto chi = vdw::make_chi(chi_D, chi_k, chi_s);
        vdw::ChiCheckConfig cc;
        cc.seed = ker_c.seed;
        j["chi"] = vdw::to_json(vdw::verify_chi_properties(chi, cc));
        j["chi"]["spec"] = vdw::to_json(chi);
      } catch (const vdw::NotNormalizable& e) {
        j["chi"] = {{"error", e.what()}};
      }
      emit(ker_c.out, j.dump(2) + "\n");
    } else if (lattice->parsed()) {
      const Knobs k(lat_c.config);
      k.fill("generators", o_g, generators);
      k.fill("Q", o_Q, Q);
      const auto gens = parse_vectors(generators);
      const auto points = vdw::enumerate_bounded_points(gens, Q);
      const auto basis = vdw::short_basis(points, Q);
      std::size_t within = 0;
      for (const auto& x : points) within += vdw::express_in_basis(x, basis).within_bound ? 1 : 0;
      json j{{"points", points.size()},
             {"basis", big_vectors(basis.vectors)},
             {"max_norm", basis.max_norm.str()},
             {"norm_bound", basis.norm_bound.str()},
             {"norm_certified", basis.norm_certified},
             {"coefficients_within_bound", within}};
      emit(lat_c.out, j.dump(2) + "\n");
    } else if (oracle->parsed()) {
      const Knobs k(ora_c.config);
      k.fill("k", o_k, ora_k);
      k.fill("limit", o_l, ora_limit);
      const auto r = vdw::brute_force_w3(ora_k, ora_limit);
      if (!ora_c.out.empty()) vdw::save_certificate(r.certificate, ora_k, ora_c.out);
      json j{{"k", r.k}, {"w", r.w}, {"nodes", r.nodes}, {"certificate", r.certificate.to_string()}};
      std::cout << j.dump(2) << "\n";
    }
  } catch (const vdw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
