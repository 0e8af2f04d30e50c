#include "vdw/fourier_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vdw/errors.hpp"
#include "vdw/parallel.hpp"
#include "vdw/rng.hpp"

namespace vdw {

// Pascal's triangle up to row 2k.
struct BinomialTable {
  std::vector<std::vector<BigInt>> rows;

  explicit BinomialTable(std::int64_t n_max) : rows(static_cast<std::size_t>(n_max + 1)) {
    for (std::size_t n = 0; n < rows.size(); ++n) {
      rows[n].resize(n + 1);
      rows[n][0] = rows[n][n] = 1;
      for (std::size_t r = 1; r < n; ++r) rows[n][r] = rows[n - 1][r - 1] + rows[n - 1][r];
    }
  }

  const BigInt& operator()(std::int64_t n, std::int64_t r) const {
    static const BigInt zero = 0;
    if (r < 0 || r > n) return zero;
    return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
  }
};

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

void check_degree(int D, std::int64_t k) {
  if (D < 1) throw ConstraintViolation("D must be >= 1");
  if (k < 0) throw ConstraintViolation("k must be >= 0");
  if (k > kChiDegreeCap) throw CapExceeded("k exceeds the coefficient table cap");
}

// T_d(j) = sum_a C(j, a) C(2a, a + xi_d) T_{d-1}(j - a); the answer is T_D(k).
BigInt coefficient_dp(const BinomialTable& c, std::int64_t k, std::span<const std::int64_t> xi) {
  std::int64_t l1 = 0;
  for (auto v : xi) l1 += std::abs(v);
  if (l1 > k) return 0;
  std::vector<BigInt> prev(static_cast<std::size_t>(k + 1), 0), next(prev.size());
  prev[0] = 1;
  for (const std::int64_t x : xi) {
    const std::int64_t ax = std::abs(x);
    for (std::int64_t j = 0; j <= k; ++j) {
      BigInt acc = 0;
      for (std::int64_t a = ax; a <= j; ++a) {
        const BigInt& tail = prev[static_cast<std::size_t>(j - a)];
        if (tail == 0) continue;
        acc += c(j, a) * c(2 * a, a + ax) * tail;
      }
      next[static_cast<std::size_t>(j)] = std::move(acc);
    }
    std::swap(prev, next);
  }
  return prev[static_cast<std::size_t>(k)];
}

std::string point_string(std::span<const double> x) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << x[i];
  return out.str();
}

}  // namespace

FejerSpec make_fejer(double X) {
  if (!(X > 0)) throw ConstraintViolation("Fejer kernel needs X > 0");
  return FejerSpec{X, static_cast<std::int64_t>(std::floor(X / 10)), 100 / X};
}

double fejer_eval(const FejerSpec& spec, std::int64_t n) {
  const std::int64_t m = 2 * spec.h + 1 - std::abs(n);
  return m > 0 ? spec.scale * static_cast<double>(m) : 0.0;
}

double fejer_sum(const FejerSpec& spec) {
  const auto m = static_cast<double>(2 * spec.h + 1);
  return spec.scale * m * m;
}

double fejer_hat(const FejerSpec& spec, double beta) {
  const double b = beta - std::nearbyint(beta);
  const double denom = std::sin(std::numbers::pi * b);
  const auto m = static_cast<double>(2 * spec.h + 1);
  if (std::abs(denom) < 1e-6) {
    double dirichlet = 1;
    for (std::int64_t j = 1; j <= spec.h; ++j) dirichlet += 2 * std::cos(2 * std::numbers::pi * b * static_cast<double>(j));
    return spec.scale * dirichlet * dirichlet;
  }
  const double ratio = std::sin(m * std::numbers::pi * b) / denom;
  return spec.scale * ratio * ratio;
}

bool KernelReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
}

KernelReport verify_fejer_properties(const FejerSpec& spec, std::span<const double> beta_samples) {
  KernelReport r;
  r.kernel = "fejer";

  PropertyCheck support{"1b", "support of w within [-X/5, X/5]", "exact", false, ""};
  support.passed = static_cast<double>(10 * spec.h) <= spec.X && fejer_eval(spec, 2 * spec.h + 1) == 0 &&
                   fejer_eval(spec, -2 * spec.h - 1) == 0;
  support.detail = "support [-" + std::to_string(2 * spec.h) + ", " + std::to_string(2 * spec.h) + "]";
  r.properties.push_back(support);

  PropertyCheck nonneg{"2b", "w^(beta) >= -1e-9", "sampled", true, ""};
  PropertyCheck decay{"4b", "w^(beta) <= 2^7 / (X ||beta||^2)", "sampled", true, ""};
  double worst_ratio = 0;
  for (const double beta : beta_samples) {
    const double v = fejer_hat(spec, beta);
    if (v < -1e-9 && nonneg.passed) {
      nonneg.passed = false;
      nonneg.detail = "beta=" + point_string(std::span(&beta, 1));
    }
    const double norm = std::abs(beta - std::nearbyint(beta));
    if (norm == 0) continue;
    const double bound = 128 / (spec.X * norm * norm);
    worst_ratio = std::max(worst_ratio, v / bound);
    if (v > bound + 1e-9 && decay.passed) {
      decay.passed = false;
      decay.detail = "beta=" + point_string(std::span(&beta, 1));
    }
  }
  if (nonneg.passed) nonneg.detail = std::to_string(beta_samples.size()) + " samples";
  if (decay.passed) decay.detail = "max w^/bound = " + std::to_string(worst_ratio);
  r.properties.push_back(nonneg);

  // sum w = scale (2h+1)^2; the integer factor is exact.
  PropertyCheck mass{"3b", "sum of w(n) >= X", "exact", false, ""};
  const double sum = fejer_sum(spec);
  mass.passed = sum >= spec.X;
  mass.detail = "sum = " + std::to_string(sum) + ", X = " + std::to_string(spec.X);
  r.properties.push_back(mass);
  r.properties.push_back(decay);
  return r;
}

BigInt chi_constant_term(int D, std::int64_t k) {
  check_degree(D, k);
  const BinomialTable table(2 * k);
  const std::vector<std::int64_t> zero(static_cast<std::size_t>(D), 0);
  return coefficient_dp(table, k, zero);
}

ChiSpec make_chi_with_tau(int D, std::int64_t k, double s, double tau) {
  check_degree(D, k);
  if (!(tau > 0) || !(tau < D)) throw ConstraintViolation("tau must lie in (0, D)");
  ChiSpec spec;
  spec.D = D;
  spec.k = k;
  spec.s = s;
  spec.tau = tau;
  spec.binomials = std::make_shared<const BinomialTable>(2 * k);
  spec.const_term = coefficient_dp(*spec.binomials, k, std::vector<std::int64_t>(static_cast<std::size_t>(D), 0));
  const LogReal four_tau_k = pow(LogReal(4) * LogReal(tau), static_cast<int>(k));
  spec.Z = LogReal(spec.const_term) - four_tau_k;
  if (!(spec.Z > 0)) {
    std::ostringstream msg;
    msg << "Z = const_term - 4^k tau^k <= 0 (D=" << D << ", k=" << k << ", tau=" << tau << ")";
    throw NotNormalizable(msg.str());
  }
  const LogReal sixteen_k = pow(LogReal(16), static_cast<int>(k));
  spec.tau_pow = static_cast<long double>(pow(LogReal(tau) / 4, static_cast<int>(k)));
  spec.denom = static_cast<long double>(spec.Z / sixteen_k);
  return spec;
}

ChiSpec make_chi(int D, std::int64_t k, double s) {
  if (!(s > 0) || s > 0.5) throw ConstraintViolation("s must lie in (0, 1/2]");
  return make_chi_with_tau(D, k, s, D - s * s);
}

BigInt power_coefficient(const ChiSpec& spec, std::span<const std::int64_t> xi) {
  if (xi.size() != static_cast<std::size_t>(spec.D)) throw ConstraintViolation("frequency dimension differs from D");
  return coefficient_dp(*spec.binomials, spec.k, xi);
}

BigInt power_coefficient(int D, std::int64_t k, std::span<const std::int64_t> xi) {
  check_degree(D, k);
  if (xi.size() != static_cast<std::size_t>(D)) throw ConstraintViolation("frequency dimension differs from D");
  return coefficient_dp(BinomialTable(2 * k), k, xi);
}

double chi_eval_real(const ChiSpec& spec, std::span<const double> x) {
  long double S = 0;
  for (const double t : x) {
    const long double c = std::cos(kPi * static_cast<long double>(t));
    S += c * c;
  }
  return static_cast<double>((std::pow(S / 4, static_cast<long double>(spec.k)) - spec.tau_pow) / spec.denom);
}

double chi_eval(const ChiSpec& spec, const TorusPoint& x) {
  const auto y = lift(x);
  return chi_eval_real(spec, y);
}

double chi_hat(const ChiSpec& spec, std::span<const std::int64_t> xi) {
  if (std::all_of(xi.begin(), xi.end(), [](auto v) { return v == 0; })) return 1.0;
  const BigInt c = power_coefficient(spec, xi);
  if (c == 0) return 0.0;
  return static_cast<double>(LogReal(c) / spec.Z);
}

std::vector<std::vector<std::int64_t>> l1_ball(int D, std::int64_t radius, std::uint64_t cap) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> xi(static_cast<std::size_t>(D), 0);
  // Depth-first over coordinates with the remaining l1 budget.
  auto rec = [&](auto&& self, int i, std::int64_t budget) -> void {
    if (i == D) {
      if (out.size() >= cap) throw CapExceeded("l1 ball exceeds the enumeration cap");
      out.push_back(xi);
      return;
    }
    for (std::int64_t v = -budget; v <= budget; ++v) {
      xi[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, budget - std::abs(v));
    }
  };
  if (radius >= 0) rec(rec, 0, radius);
  return out;
}

long double chi_integral_rectangle(const ChiSpec& spec, std::uint64_t cap) {
  // P = k+1 nodes j/P per axis integrate every e(m t) with |m| <= k exactly.
  // chi depends on the nodes only through the multiset of cos^2 values, and
  // node j matches node P-j, so sum over sorted representatives.
  const std::int64_t P = spec.k + 1;
  const std::int64_t H = P / 2 + 1;  // representatives 0..floor(P/2)
  const int D = spec.D;
  {
    // C(H + D - 1, D) multisets.
    long double count = 1;
    for (int i = 0; i < D; ++i) count = count * static_cast<long double>(H + i) / static_cast<long double>(i + 1);
    if (count > static_cast<long double>(cap)) throw CapExceeded("rectangle rule exceeds the evaluation cap");
  }
  std::vector<long double> c2(static_cast<std::size_t>(H)), weight(static_cast<std::size_t>(H));
  for (std::int64_t j = 0; j < H; ++j) {
    const long double c = std::cos(kPi * static_cast<long double>(j) / static_cast<long double>(P));
    c2[static_cast<std::size_t>(j)] = c * c;
    weight[static_cast<std::size_t>(j)] = (j == 0 || 2 * j == P) ? 1.0L : 2.0L;
  }
  std::vector<long double> factorial(static_cast<std::size_t>(D + 1), 1.0L);
  for (int i = 1; i <= D; ++i) factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;
  const auto kk = static_cast<long double>(spec.k);

  std::vector<long double> partial(static_cast<std::size_t>(H), 0.0L);
  parallel_for(H, [&](std::int64_t first) {
    long double acc = 0;
    // Coordinates in nondecreasing order starting with `first`; `run` is the
    // length of the current block of equal values, `mult` accumulates
    // D!/prod(block!) incrementally.
    auto rec = [&](auto&& self, int depth, std::int64_t last, long double S, long double w, long double inv_blocks,
                   int run) -> void {
      if (depth == D) {
        const long double mult = factorial[static_cast<std::size_t>(D)] * inv_blocks;
        acc += mult * w * (std::pow(S / 4, kk) - spec.tau_pow);
        return;
      }
      for (std::int64_t j = last; j < H; ++j) {
        const int r = j == last ? run + 1 : 1;
        self(self, depth + 1, j, S + c2[static_cast<std::size_t>(j)], w * weight[static_cast<std::size_t>(j)],
             inv_blocks / r, r);
      }
    };
    rec(rec, 1, first, c2[static_cast<std::size_t>(first)], weight[static_cast<std::size_t>(first)], 1.0L, 1);
    partial[static_cast<std::size_t>(first)] = acc;
  });
  long double total = 0;
  for (const long double p : partial) total += p;
  return total / std::pow(static_cast<long double>(P), static_cast<long double>(D)) / spec.denom;
}

MonteCarloEstimate chi_abs_integral(const ChiSpec& spec, std::int64_t strata_per_dim, int samples_per_stratum,
                                    std::uint64_t seed) {
  const int D = spec.D;
  std::int64_t G = strata_per_dim;
  if (G <= 0) {
    G = 1;
    while (std::pow(static_cast<double>(G + 1), D) <= static_cast<double>(1 << 20)) ++G;
  }
  if (samples_per_stratum < 2) throw ConstraintViolation("stratified estimate needs >= 2 samples per stratum");
  std::int64_t strata = 1;
  for (int i = 0; i < D; ++i) strata *= G;

  constexpr std::int64_t kChunk = 4096;
  const std::int64_t chunks = (strata + kChunk - 1) / kChunk;
  std::vector<long double> sums(static_cast<std::size_t>(chunks)), vars(static_cast<std::size_t>(chunks));
  parallel_for(chunks, [&](std::int64_t chunk) {
    long double sum = 0, var = 0;
    std::vector<double> x(static_cast<std::size_t>(D));
    std::vector<double> f(static_cast<std::size_t>(samples_per_stratum));
    const std::int64_t end = std::min(strata, (chunk + 1) * kChunk);
    for (std::int64_t h = chunk * kChunk; h < end; ++h) {
      CounterStream stream(seed, StreamTag::kQuadrature, static_cast<std::uint64_t>(h));
      long double mean = 0;
      for (int s = 0; s < samples_per_stratum; ++s) {
        std::int64_t cell = h;
        for (int i = 0; i < D; ++i) {
          x[static_cast<std::size_t>(i)] = (static_cast<double>(cell % G) + stream.uniform()) / static_cast<double>(G);
          cell /= G;
        }
        f[static_cast<std::size_t>(s)] = std::abs(chi_eval_real(spec, x));
        mean += f[static_cast<std::size_t>(s)];
      }
      mean /= samples_per_stratum;
      long double ss = 0;
      for (const double v : f) ss += (v - mean) * (v - mean);
      sum += mean;
      var += ss / (samples_per_stratum - 1) / samples_per_stratum;
    }
    sums[static_cast<std::size_t>(chunk)] = sum;
    vars[static_cast<std::size_t>(chunk)] = var;
  });
  long double sum = 0, var = 0;
  for (std::int64_t c = 0; c < chunks; ++c) {
    sum += sums[static_cast<std::size_t>(c)];
    var += vars[static_cast<std::size_t>(c)];
  }
  const auto H = static_cast<long double>(strata);
  return MonteCarloEstimate{static_cast<double>(sum / H), static_cast<double>(std::sqrt(var) / H),
                            static_cast<std::uint64_t>(strata) * static_cast<std::uint64_t>(samples_per_stratum)};
}

namespace {

// Frequencies for the coefficient checks: the whole ball when small,
// otherwise uniform draws from it plus the axis extremes.
std::vector<std::vector<std::int64_t>> coefficient_sample(int D, std::int64_t radius, const ChiCheckConfig& config,
                                                          bool& exhaustive) {
  try {
    auto all = l1_ball(D, radius, config.exact_coefficient_cap);
    exhaustive = true;
    return all;
  } catch (const CapExceeded&) {
  }
  exhaustive = false;
  std::vector<std::vector<std::int64_t>> out;
  CounterStream stream(config.seed, StreamTag::kKernelSamples, 1);
  std::vector<std::int64_t> xi(static_cast<std::size_t>(D));
  while (static_cast<std::int64_t>(out.size()) < config.hat_samples) {
    std::int64_t l1 = 0;
    for (auto& v : xi) {
      v = static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(2 * radius + 1))) - radius;
      l1 += std::abs(v);
    }
    if (l1 <= radius) out.push_back(xi);
  }
  std::fill(xi.begin(), xi.end(), 0);
  xi[0] = radius;
  out.push_back(xi);
  return out;
}

std::vector<std::vector<std::int64_t>> shell_sample(int D, std::int64_t radius, std::int64_t count,
                                                    std::uint64_t seed) {
  // Uniformly random signs and compositions of `radius` into D parts.
  std::vector<std::vector<std::int64_t>> out;
  CounterStream stream(seed, StreamTag::kKernelSamples, 2);
  for (std::int64_t t = 0; t < count; ++t) {
    std::vector<std::int64_t> cuts(static_cast<std::size_t>(D - 1));
    for (auto& c : cuts) c = static_cast<std::int64_t>(stream.below(static_cast<std::uint64_t>(radius + 1)));
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::int64_t> xi(static_cast<std::size_t>(D));
    std::int64_t prev = 0;
    for (int i = 0; i < D; ++i) {
      const std::int64_t next = i + 1 < D ? cuts[static_cast<std::size_t>(i)] : radius;
      xi[static_cast<std::size_t>(i)] = (stream.below(2) ? 1 : -1) * (next - prev);
      prev = next;
    }
    out.push_back(std::move(xi));
  }
  return out;
}

std::string vec_string(std::span<const std::int64_t> xi) {
  std::string s = "(";
  for (std::size_t i = 0; i < xi.size(); ++i) s += (i ? "," : "") + std::to_string(xi[i]);
  return s + ")";
}

}  // namespace

KernelReport verify_chi_properties(const ChiSpec& spec, const ChiCheckConfig& config) {
  KernelReport r;
  r.kernel = "chi";
  const int D = spec.D;

  {
    PropertyCheck sign{"1a", "chi(x) <= 0 whenever ||x||_T^D >= s", "sampled", true, ""};
    CounterStream stream(config.seed, StreamTag::kKernelSamples, 0);
    std::vector<double> x(static_cast<std::size_t>(D));
    for (std::int64_t t = 0; t < config.sign_samples && sign.passed; ++t) {
      double sup = 0;
      for (auto& v : x) {
        v = stream.uniform() - 0.5;
        sup = std::max(sup, std::abs(v));
      }
      if (sup < spec.s) {
        // Push one coordinate out to a uniform point of [s, 1/2] with a random sign.
        const auto i = static_cast<std::size_t>(stream.below(static_cast<std::uint64_t>(D)));
        const double mag = spec.s + stream.uniform() * (0.5 - spec.s);
        x[i] = stream.below(2) ? mag : -mag;
      }
      const double v = chi_eval_real(spec, x);
      if (v > 0) {
        sign.passed = false;
        sign.detail = "sample " + std::to_string(t) + " x=" + point_string(x) + " chi=" + std::to_string(v);
      }
    }
    if (sign.passed) sign.detail = std::to_string(config.sign_samples) + " samples";
    r.properties.push_back(sign);
  }

  {
    bool exhaustive = false;
    const auto ball = coefficient_sample(D, spec.k, config, exhaustive);
    PropertyCheck nonneg{"2a", "chi^(xi) >= 0 for xi != 0", exhaustive ? "exact" : "sampled", true, ""};
    for (const auto& xi : ball) {
      if (power_coefficient(spec, xi) < 0) {
        nonneg.passed = false;
        nonneg.detail = "xi=" + vec_string(xi);
        break;
      }
    }
    if (nonneg.passed) nonneg.detail = std::to_string(ball.size()) + " frequencies with |xi|_1 <= k";
    r.properties.push_back(nonneg);

    PropertyCheck support{"3a", "chi^(xi) = 0 for |xi|_1 > k", exhaustive ? "exact" : "sampled", true, ""};
    std::vector<std::vector<std::int64_t>> outside;
    if (exhaustive) {
      for (auto& xi : l1_ball(D, spec.k + 2, config.exact_coefficient_cap * 64)) {
        std::int64_t l1 = 0;
        for (auto v : xi) l1 += std::abs(v);
        if (l1 > spec.k) outside.push_back(std::move(xi));
      }
    } else {
      outside = shell_sample(D, spec.k + 1, config.hat_samples, config.seed);
    }
    for (const auto& xi : outside) {
      if (power_coefficient(spec, xi) != 0) {
        support.passed = false;
        support.detail = "xi=" + vec_string(xi);
        break;
      }
    }
    if (support.passed) support.detail = std::to_string(outside.size()) + " frequencies with |xi|_1 > k";
    r.properties.push_back(support);
  }

  {
    PropertyCheck zero{"chi^(0)", "chi^(0) = 1", "exact", false, ""};
    const std::vector<std::int64_t> origin(static_cast<std::size_t>(D), 0);
    zero.passed = chi_hat(spec, origin) == 1.0;
    zero.detail = "Z = " + to_decimal(spec.Z);
    r.properties.push_back(zero);
  }

  {
    PropertyCheck integral{"4a", "integral of chi = 1", "quadrature", false, ""};
    try {
      const long double v = chi_integral_rectangle(spec, config.quadrature_cap);
      integral.passed = std::abs(v - 1.0L) <= 1e-6L;
      std::ostringstream out;
      out.precision(15);
      out << "rectangle rule, " << spec.k + 1 << " nodes per axis: " << static_cast<double>(v);
      integral.detail = out.str();
    } catch (const CapExceeded& e) {
      integral.detail = e.what();
    }
    r.properties.push_back(integral);
  }

  {
    PropertyCheck abs_mass{"5a", "integral of |chi| <= 3", "sampled", false, ""};
    const auto mc = chi_abs_integral(spec, config.strata_per_dim, config.samples_per_stratum, config.seed);
    abs_mass.passed = mc.estimate + 3 * mc.stderr_ <= 3;
    std::ostringstream out;
    out.precision(6);
    out << "estimate " << mc.estimate << " +- " << mc.stderr_ << " (" << mc.evaluations << " evaluations)";
    abs_mass.detail = out.str();
    r.properties.push_back(abs_mass);
  }
  return r;
}

KernelReport verify_power_coefficients(int D, std::int64_t k, std::uint64_t cap) {
  check_degree(D, k);
  const BinomialTable table(2 * k);
  KernelReport r;
  r.kernel = "power-polynomial";
  PropertyCheck nonneg{"2a", "coefficients with |xi|_1 <= k are >= 0", "exact", true, ""};
  PropertyCheck support{"3a", "coefficients with |xi|_1 in {k+1, k+2} vanish", "exact", true, ""};
  std::size_t inside = 0, outside = 0;
  for (const auto& xi : l1_ball(D, k + 2, cap)) {
    std::int64_t l1 = 0;
    for (auto v : xi) l1 += std::abs(v);
    const BigInt c = coefficient_dp(table, k, xi);
    if (l1 <= k) {
      ++inside;
      if (c < 0 && nonneg.passed) {
        nonneg.passed = false;
        nonneg.detail = "xi=" + vec_string(xi);
      }
    } else {
      ++outside;
      if (c != 0 && support.passed) {
        support.passed = false;
        support.detail = "xi=" + vec_string(xi);
      }
    }
  }
  if (nonneg.passed) nonneg.detail = std::to_string(inside) + " frequencies";
  if (support.passed) support.detail = std::to_string(outside) + " frequencies";
  r.properties.push_back(nonneg);
  r.properties.push_back(support);
  return r;
}

InversionResult inversion_crosscheck(const TorusPoint& theta, std::int64_t d, std::int64_t n1, const TorusPoint& u,
                                     const TorusPoint& center, const FejerSpec& fejer, const ChiSpec& chi,
                                     std::uint64_t cap) {
  const auto D = static_cast<std::size_t>(chi.D);
  if (theta.dim() != D || u.dim() != D || center.dim() != D)
    throw ConstraintViolation("inversion_crosscheck: dimension mismatch");
  InversionResult out;
  const TorusPoint y0 = scalar_orbit_point(n1, theta) - u - center;
  const TorusPoint alpha = scalar_orbit_point(d, theta);

  const std::int64_t reach = 2 * fejer.h;
  for (std::int64_t i = -reach; i <= reach; ++i) {
    const double w = fejer_eval(fejer, i);
    if (w != 0) out.direct_sum += w * chi_eval(chi, y0 + i * alpha);
  }

  const auto ball = l1_ball(chi.D, chi.k, cap);
  out.frequencies = ball.size();
  for (const auto& xi : ball) {
    const double c = chi_hat(chi, xi);
    if (c == 0) continue;
    const double phase = lift_coord(dot_mod1(xi, y0));
    const double beta = lift_coord(dot_mod1(xi, alpha));
    const double term = c * std::cos(2 * std::numbers::pi * phase) * fejer_hat(fejer, beta);
    out.fourier_sum += term;
    if (std::all_of(xi.begin(), xi.end(), [](auto v) { return v == 0; })) out.zero_term = term;
  }
  out.abs_diff = std::abs(out.direct_sum - out.fourier_sum);
  return out;
}

nlohmann::json to_json(const KernelReport& report) {
  nlohmann::json j;
  j["kernel"] = report.kernel;
  j["all_passed"] = report.all_passed();
  auto& props = j["properties"] = nlohmann::json::array();
  for (const auto& p : report.properties)
    props.push_back({{"id", p.id}, {"statement", p.statement}, {"method", p.method}, {"passed", p.passed},
                     {"detail", p.detail}});
  return j;
}

nlohmann::json to_json(const ChiSpec& spec) {
  return {{"D", spec.D},
          {"k", spec.k},
          {"s", spec.s},
          {"tau", spec.tau},
          {"const_term", spec.const_term.str()},
          {"Z", to_decimal(spec.Z)}};
}

}  // namespace vdw
