#include "mclt/kernels.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace mclt {

void KernelSpec::validate() const {
  if (variant == KernelVariant::Rademacher) return;
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw std::invalid_argument("KernelSpec: alpha must lie in (1/2, 1), got " +
                                std::to_string(alpha));
  }
  if (!(1.0 - alpha < 2.0 * beta && 2.0 * beta < alpha)) {
    throw std::invalid_argument(
        "KernelSpec: beta must satisfy 1 - alpha < 2*beta < alpha, got beta = " +
        std::to_string(beta));
  }
}

double IncrementDistribution::mean() const {
  double acc = 0.0;
  for (const Atom& a : atoms) acc += a.value * a.probability;
  return acc;
}

double IncrementDistribution::second_moment() const {
  double acc = 0.0;
  for (const Atom& a : atoms) acc += a.value * a.value * a.probability;
  return acc;
}

double lambda_ni(long n, long i, double kappa) {
  if (i < 1 || i > n) {
    throw std::invalid_argument("lambda_ni: step index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n) + "]");
  }
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("lambda_ni: kappa must be positive");
  }
  return std::sqrt(static_cast<double>(n - i) + kappa * kappa);
}

Bands bands_ni(long n, long i, double kappa) {
  const double lam = lambda_ni(n, i, kappa);
  return Bands{lam, 2.0 * lam};
}

PreparedKernel::PreparedKernel(const KernelSpec& spec, long n) : n_(n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("PreparedKernel: n must be >= 1");
  if (spec.variant == KernelVariant::Rademacher) {
    plain_cutoff_ = std::numeric_limits<double>::infinity();
    plain_steps_ = n;
    kappa_ = 1.0;  // unused
    kappa_sq_ = 1.0;
    return;
  }
  const double nd = static_cast<double>(n);
  // The modified branch applies exactly when i > n - n^alpha as reals.
  plain_cutoff_ = nd - std::pow(nd, spec.alpha);
  const double clamped = std::floor(plain_cutoff_);
  plain_steps_ = clamped <= 0.0 ? 0
               : clamped >= nd ? n
                               : static_cast<long>(clamped);
  kappa_ = std::pow(nd, spec.beta);
  kappa_sq_ = kappa_ * kappa_;
}

void PreparedKernel::check_step(long i) const {
  if (i < 1 || i > n_) {
    throw std::invalid_argument("kernel step index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_) + "]");
  }
}

IncrementDistribution conditional_law(const KernelSpec& spec, long n, long i,
                                      double s_prev) {
  const PreparedKernel kernel(spec, n);
  kernel.check_step(i);
  const double mag =
      PreparedKernel::branch_magnitude(kernel.classify(i, s_prev));
  IncrementDistribution law;
  law.atoms = {{-mag, 0.5}, {mag, 0.5}};
  return law;
}

double conditional_variance(const KernelSpec& spec, long n, long i,
                            double s_prev) {
  const PreparedKernel kernel(spec, n);
  kernel.check_step(i);
  return PreparedKernel::branch_variance(kernel.classify(i, s_prev));
}

}  // namespace mclt
