#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vdw/exact_linalg.hpp"
#include "vdw/params.hpp"
#include "vdw/torus.hpp"

namespace vdw {

// ---- Fejer-type kernel w = (100/X) 1_[-h,h] * 1_[-h,h], h = floor(X/10) ----

struct FejerSpec {
  double X = 0;
  std::int64_t h = 0;
  double scale = 0;
};

FejerSpec make_fejer(double X);

double fejer_eval(const FejerSpec& spec, std::int64_t n);
/// Sum over n of w(n), i.e. scale * (2h+1)^2.
double fejer_sum(const FejerSpec& spec);
/// sum_n w(n) e(-beta n) = scale * |sum_{|m|<=h} e(beta m)|^2, closed form.
double fejer_hat(const FejerSpec& spec, double beta);

struct PropertyCheck {
  std::string id;
  std::string statement;
  std::string method;  // "exact", "sampled" or "quadrature"
  bool passed = false;
  std::string detail;
};

struct KernelReport {
  std::string kernel;
  std::vector<PropertyCheck> properties;
  bool all_passed() const;
};

/// Support within [-X/5, X/5], nonnegative transform and the decay bound
/// w^(beta) <= 2^7 / (X ||beta||^2) at the samples, and sum w >= X.
KernelReport verify_fejer_properties(const FejerSpec& spec, std::span<const double> beta_samples);

// ---- Cosine-power kernel ----
//
// psi(x) = 4^k (sum_i cos^2(pi x_i))^k - 4^k tau^k and chi = psi / Z with
// Z = psi^(0). Since 4 cos^2(pi t) = 2 + e(t) + e(-t), the first term is the
// trigonometric polynomial (2D + sum_i (e(x_i) + e(-x_i)))^k whose
// coefficients are nonnegative integers.

struct BinomialTable;

struct ChiSpec {
  int D = 0;
  std::int64_t k = 0;
  double s = 0;
  double tau = 0;
  BigInt const_term = 0;  // coefficient of e(0) in the power polynomial
  LogReal Z = 0;          // const_term - 4^k tau^k
  long double tau_pow = 0;  // (tau/4)^k
  long double denom = 0;    // Z / 16^k
  std::shared_ptr<const BinomialTable> binomials;
};

inline constexpr std::int64_t kChiDegreeCap = 4096;

/// Constant coefficient of (2D + sum_i (e(x_i) + e(-x_i)))^k. Throws CapExceeded.
BigInt chi_constant_term(int D, std::int64_t k);

/// tau = D - s^2. Throws NotNormalizable when Z <= 0.
ChiSpec make_chi(int D, std::int64_t k, double s);
/// Explicit tau in (0, D), decoupled from s. Throws NotNormalizable when Z <= 0.
ChiSpec make_chi_with_tau(int D, std::int64_t k, double s, double tau);

/// Coefficient of e(xi . x) in the power polynomial; zero when |xi|_1 > k.
BigInt power_coefficient(const ChiSpec& spec, std::span<const std::int64_t> xi);
/// Same coefficient without a normalized spec (builds its own binomial table).
BigInt power_coefficient(int D, std::int64_t k, std::span<const std::int64_t> xi);

double chi_eval(const ChiSpec& spec, const TorusPoint& x);
/// chi at the real point x (coordinates taken mod 1).
double chi_eval_real(const ChiSpec& spec, std::span<const double> x);
/// chi^(0) is exactly 1; other coefficients are power_coefficient / Z.
double chi_hat(const ChiSpec& spec, std::span<const std::int64_t> xi);

/// Every xi in Z^D with |xi|_1 <= radius, lexicographic. Throws CapExceeded
/// when more than cap points would be produced.
std::vector<std::vector<std::int64_t>> l1_ball(int D, std::int64_t radius, std::uint64_t cap);

struct ChiCheckConfig {
  std::uint64_t seed = 0;
  std::int64_t sign_samples = 10'000;
  /// Coefficient checks enumerate the l1 ball when it has at most this many
  /// points; otherwise hat_samples random frequencies are checked.
  std::uint64_t exact_coefficient_cap = 20'000;
  std::int64_t hat_samples = 48;
  /// Rectangle-rule evaluations allowed for the integral check.
  std::uint64_t quadrature_cap = 50'000'000;
  /// Strata per axis for the |chi| integral (0: largest with G^D <= 2^20).
  std::int64_t strata_per_dim = 0;
  int samples_per_stratum = 2;
};

/// Rectangle rule with k+1 nodes per axis, exact for chi (degree k per axis).
/// Throws CapExceeded when the symmetric enumeration is too large.
long double chi_integral_rectangle(const ChiSpec& spec, std::uint64_t cap);

struct MonteCarloEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::uint64_t evaluations = 0;
};

/// Stratified Monte Carlo estimate of the integral of |chi|.
MonteCarloEstimate chi_abs_integral(const ChiSpec& spec, std::int64_t strata_per_dim, int samples_per_stratum,
                                    std::uint64_t seed);

/// Properties: chi <= 0 outside the sup-norm ball of radius s; nonnegative
/// coefficients; support in the l1 ball of radius k; chi^(0) = 1; integral 1;
/// integral of |chi| at most 3.
KernelReport verify_chi_properties(const ChiSpec& spec, const ChiCheckConfig& config);

/// Exact checks on the power polynomial alone: every coefficient with
/// |xi|_1 <= k is nonnegative and every coefficient on the shells k+1, k+2 is zero.
KernelReport verify_power_coefficients(int D, std::int64_t k, std::uint64_t cap = 1'000'000);

struct InversionResult {
  double direct_sum = 0;
  double fourier_sum = 0;
  double abs_diff = 0;
  double zero_term = 0;  // xi = 0 contribution, chi^(0) w^(0) = sum w
  std::size_t frequencies = 0;
};

/// sum_i w(i) chi(theta (n1 + i d) - u - center) computed directly and as
/// sum_xi chi^(xi) cos(2 pi xi . (theta n1 - u - center)) w^(xi . d theta).
InversionResult inversion_crosscheck(const TorusPoint& theta, std::int64_t d, std::int64_t n1, const TorusPoint& u,
                                     const TorusPoint& center, const FejerSpec& fejer, const ChiSpec& chi,
                                     std::uint64_t cap = 2'000'000);

nlohmann::json to_json(const KernelReport& report);
nlohmann::json to_json(const ChiSpec& spec);

}  // namespace vdw
