#include "mclt/augment.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mclt {

AugmentResult augment_path(std::span<const double> increments,
                           std::span<const double> cond_variances, double s2,
                           double gamma, RngStream& stream) {
  const long n = static_cast<long>(increments.size());
  if (cond_variances.size() != increments.size()) {
    throw std::invalid_argument(
        "augment_path: increments and cond_variances disagree in length");
  }
  if (n < 1) throw std::invalid_argument("augment_path: empty path");
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("augment_path: gamma must be positive");
  }
  if (!(s2 > 0.0)) {
    throw std::invalid_argument("augment_path: s2 must be positive");
  }
  const double gamma_sq = gamma * gamma;
  if (s2 > static_cast<double>(n) * gamma_sq * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "augment_path: s2 exceeds n*gamma^2, inconsistent with the increment "
        "bound");
  }
  for (double x : increments) {
    if (std::abs(x) > gamma) {
      throw std::invalid_argument("augment_path: |increment| " +
                                  std::to_string(std::abs(x)) +
                                  " exceeds gamma " + std::to_string(gamma));
    }
  }

  // tau = last index whose variance prefix has not yet passed s2.
  long tau = 0;
  double prefix = 0.0;
  for (long i = 0; i < n; ++i) {
    const double next = prefix + cond_variances[i];
    if (next > s2) break;
    prefix = next;
    tau = i + 1;
  }

  const double deficit = s2 - prefix;
  long r = static_cast<long>(std::floor(deficit / gamma_sq));
  if (r > n) r = n;  // float guard; mathematically r <= n already
  double residual_var = deficit - static_cast<double>(r) * gamma_sq;
  if (residual_var < -1e-10) {
    throw std::invalid_argument(
        "augment_path: negative residual variance, inconsistent inputs");
  }
  if (residual_var < 0.0) residual_var = 0.0;

  AugmentResult out;
  out.tau = tau;
  out.r = r;
  out.residual_magnitude = std::sqrt(residual_var);
  out.increments.assign(2 * n, 0.0);
  out.cond_variances.assign(2 * n, 0.0);

  for (long i = 0; i < tau; ++i) {
    out.increments[i] = increments[i];
    out.cond_variances[i] = cond_variances[i];
  }
  for (long i = 0; i < r; ++i) {
    out.increments[tau + i] = stream.next_sign() * gamma;
    out.cond_variances[tau + i] = gamma_sq;
  }
  if (tau + r < 2 * n) {
    const double x = stream.next_sign() * out.residual_magnitude;
    out.increments[tau + r] = x == 0.0 ? 0.0 : x;  // never store -0.0
    out.cond_variances[tau + r] = residual_var;
  }
  return out;
}

bool verify_v2_one(const AugmentResult& result, double s2) {
  double acc = 0.0;
  for (double v : result.cond_variances) acc += v;
  return std::abs(acc - s2) <= 1e-10;
}

}  // namespace mclt
