#include "vdw/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "vdw/errors.hpp"

namespace vdw {

namespace {

using boost::multiprecision::log;

void check_constants(const Rational& c, std::int64_t C1, std::int64_t C2) {
  if (c.den <= 0 || c.num <= 0 || c.num >= c.den)
    throw ConstraintViolation("c must lie in (0,1), got " + c.to_string());
  if (C1 < 12) throw ConstraintViolation("C1 >= 12 violated (C1=" + std::to_string(C1) + ")");
  if (C2 < 800 * C1)
    throw ConstraintViolation("C2 >= 800*C1 violated (C2=" + std::to_string(C2) + ")");
}

LogReal log_of(double v) {
  if (v <= 0) return -std::numeric_limits<LogReal>::infinity();
  return log(LogReal(v));
}

LogReal parse_log_real(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains("ln") || !j.at("ln").is_string() || j.size() != 1)
    throw ConfigError(std::string("paper-scale key '") + key + "' must be {\"ln\": \"<decimal>\"}");
  return LogReal(j.at("ln").get<std::string>());
}

}  // namespace

Rational Rational::parse(const std::string& text) {
  Rational r;
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      // Decimal literal: scale by powers of ten until integral.
      const auto dot = text.find('.');
      std::string digits = text;
      std::int64_t den = 1;
      if (dot != std::string::npos) {
        digits = text.substr(0, dot) + text.substr(dot + 1);
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      }
      std::size_t used = 0;
      r.num = std::stoll(digits, &used);
      if (used != digits.size()) throw ConfigError("bad rational: " + text);
      r.den = den;
    } else {
      std::size_t used = 0;
      r.num = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw ConfigError("bad rational: " + text);
      const std::string tail = text.substr(slash + 1);
      r.den = std::stoll(tail, &used);
      if (used != tail.size()) throw ConfigError("bad rational: " + text);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("bad rational: " + text);
  }
  if (r.den == 0) throw ConfigError("bad rational: " + text);
  return r;
}

ParameterSet derive_paper_schedule(int D, Rational c, std::int64_t C1, std::int64_t C2) {
  if (D < 2) throw ConstraintViolation("D >= 2 required, got " + std::to_string(D));
  check_constants(c, C1, C2);

  ParameterSet p;
  p.mode = ScaleMode::kPaper;
  p.D = D;
  p.c = c;
  p.C1 = C1;
  p.C2 = C2;

  const LogReal lnD = log(LogReal(D));
  const LogReal cc = c.to_log_real();
  const LogReal dim(D);

  p.log_rho = -4 * lnD;
  p.logN = cc * dim * dim / 2 * lnD;
  p.logM = (LogReal(1) / 4 + cc) * dim * (-p.log_rho);
  p.logY = cc * dim * (-p.log_rho);
  p.logK = p.log_rho + 4 / dim * p.logN;
  p.logX = 100 * LogReal(C2 + 2) / dim * p.logN;
  p.log_width = -4 / dim * p.logN;
  p.rho = static_cast<double>(exp(p.log_rho));
  p.width = static_cast<double>(exp(p.log_width));
  return p;
}

ParameterSet make_desk_params(int D, std::int64_t N, std::int64_t M, std::int64_t K, double width,
                              double rho, double X_target, double Y_target, Rational c,
                              std::int64_t C1, std::int64_t C2) {
  if (D < 1) throw ConstraintViolation("D >= 1 required");
  if (N < 3) throw ConstraintViolation("N >= 3 required");
  if (M < 1) throw ConstraintViolation("M >= 1 required");
  if (K < 0) throw ConstraintViolation("K >= 0 required");
  if (!(width > 0)) throw ConstraintViolation("width > 0 required");
  if (!(rho > 0)) throw ConstraintViolation("rho > 0 required");
  if (!(X_target > 0) || !(Y_target >= 0)) throw ConstraintViolation("X, Y must be positive");
  check_constants(c, C1, C2);

  const double outer = static_cast<double>(K + 1) * width;
  if (!(outer <= rho)) {
    std::ostringstream msg;
    msg << "(K+1)*width <= rho violated: " << outer << " > " << rho;
    throw ConstraintViolation(msg.str());
  }
  if (!(rho <= 1.0 / 12)) {
    std::ostringstream msg;
    msg << "rho <= 1/12 violated: rho = " << rho;
    throw ConstraintViolation(msg.str());
  }
  if (!(2 * rho + width < 0.25)) {
    std::ostringstream msg;
    msg << "2*rho + width < 1/4 violated: " << 2 * rho + width;
    throw ConstraintViolation(msg.str());
  }

  ParameterSet p;
  p.mode = ScaleMode::kDesk;
  p.D = D;
  p.c = c;
  p.C1 = C1;
  p.C2 = C2;
  p.rho = rho;
  p.width = width;
  p.N = N;
  p.M = M;
  p.K = K;
  p.X_target = X_target;
  p.Y_target = Y_target;
  p.logN = log(LogReal(N));
  p.logM = log(LogReal(M));
  p.logK = log_of(static_cast<double>(K));
  p.logX = log_of(X_target);
  p.logY = log_of(Y_target);
  p.log_rho = log(LogReal(rho));
  p.log_width = log(LogReal(width));
  return p;
}

OrderingReport validate_ordering(const ParameterSet& p) {
  OrderingReport r;
  r.quantities = {{"K", p.logK},
                  {"Y", p.logY},
                  {"M", p.logM},
                  {"rho^-D", -LogReal(p.D) * p.log_rho},
                  {"X", p.logX}};
  r.chain_holds = true;
  for (std::size_t i = 0; i + 1 < r.quantities.size(); ++i) {
    const auto& a = r.quantities[i];
    const auto& b = r.quantities[i + 1];
    const bool holds = a.log_value < b.log_value;
    r.inequalities.push_back({"log " + a.name + " < log " + b.name, holds});
    r.chain_holds = r.chain_holds && holds;
  }
  return r;
}

double blue_gap_radius(const ParameterSet& p) { return 0.5 * std::sqrt(p.width); }

std::string to_decimal(const LogReal& v) {
  if (boost::multiprecision::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream out;
  out.precision(std::numeric_limits<LogReal>::max_digits10);
  out << v;
  return out.str();
}

nlohmann::json to_json(const ParameterSet& p, std::optional<std::uint64_t> seed) {
  nlohmann::json j;
  j["c"] = p.c.to_string();
  j["C1"] = p.C1;
  j["C2"] = p.C2;
  j["D"] = p.D;
  if (p.mode == ScaleMode::kPaper) {
    j["mode"] = "paper";
    auto ln = [](const LogReal& v) { return nlohmann::json{{"ln", to_decimal(v)}}; };
    j["N"] = ln(p.logN);
    j["M"] = ln(p.logM);
    j["K"] = ln(p.logK);
    j["X"] = ln(p.logX);
    j["Y"] = ln(p.logY);
    j["rho"] = ln(p.log_rho);
    j["width"] = ln(p.log_width);
  } else {
    j["mode"] = "desk";
    j["N"] = *p.N;
    j["M"] = *p.M;
    j["K"] = *p.K;
    j["X"] = *p.X_target;
    j["Y"] = *p.Y_target;
    j["rho"] = p.rho;
    j["width"] = p.width;
  }
  if (seed) j["seed"] = *seed;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {"mode", "D", "c", "C1", "C2", "rho", "N",
                                              "M",    "K", "width", "X", "Y", "seed"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.count(key)) throw ConfigError("unknown config key: " + key);
  if (!j.contains("mode") || !j.contains("D")) throw ConfigError("config needs 'mode' and 'D'");

  RunConfig cfg;
  try {
    const std::string mode = j.at("mode").get<std::string>();
    const int D = j.at("D").get<int>();
    Rational c{1, 100};
    if (j.contains("c")) {
      const auto& cj = j.at("c");
      if (cj.is_string()) {
        c = Rational::parse(cj.get<std::string>());
      } else if (cj.is_number()) {
        // Shortest round-trip decimal form of the number, then exact parse.
        std::string txt = cj.dump();
        c = Rational::parse(txt);
      } else {
        throw ConfigError("'c' must be a string like \"1/100\" or a number");
      }
    }
    const std::int64_t C1 = j.value("C1", std::int64_t{12});
    const std::int64_t C2 = j.value("C2", std::int64_t{9600});
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    if (mode == "paper") {
      cfg.params = derive_paper_schedule(D, c, C1, C2);
      // Any stored log values must agree with the recomputed schedule.
      const std::pair<const char*, const LogReal*> stored[] = {
          {"N", &cfg.params.logN},  {"M", &cfg.params.logM},      {"K", &cfg.params.logK},
          {"X", &cfg.params.logX},  {"Y", &cfg.params.logY},      {"rho", &cfg.params.log_rho},
          {"width", &cfg.params.log_width}};
      for (const auto& [key, value] : stored) {
        if (!j.contains(key)) continue;
        const LogReal given = parse_log_real(j.at(key), key);
        const LogReal tol = LogReal("1e-40") * (1 + abs(*value));
        if (abs(given - *value) > tol)
          throw ConfigError(std::string("paper-scale '") + key +
                            "' disagrees with the schedule derived from D, c, C1, C2");
      }
    } else if (mode == "desk") {
      for (const char* key : {"N", "M", "K", "width", "rho", "X", "Y"})
        if (!j.contains(key)) throw ConfigError(std::string("desk config needs '") + key + "'");
      cfg.params = make_desk_params(D, j.at("N").get<std::int64_t>(), j.at("M").get<std::int64_t>(),
                                    j.at("K").get<std::int64_t>(), j.at("width").get<double>(),
                                    j.at("rho").get<double>(), j.at("X").get<double>(),
                                    j.at("Y").get<double>(), c, C1, C2);
    } else {
      throw ConfigError("mode must be 'paper' or 'desk', got '" + mode + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

std::string params_digest(const ParameterSet& p) {
  const std::string canonical = to_json(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vdw
