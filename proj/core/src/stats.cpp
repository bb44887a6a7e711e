#include "mclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mclt/numeric.hpp"

namespace mclt {

namespace {

Estimate mean_estimate(std::span<const double> values) {
  const MeanStdError ms = mean_std_error(values);
  return Estimate{ms.mean, ms.std_error, static_cast<long>(values.size())};
}

std::vector<double> variance_sums(const PathSummary& summary) {
  std::vector<double> sums(summary.m);
  for (long k = 0; k < summary.m; ++k) sums[k] = summary.variance_sum(k);
  return sums;
}

std::vector<double> variance_sums(const PathBatch& batch) {
  std::vector<double> sums(batch.m);
  for (long k = 0; k < batch.m; ++k) {
    const auto row = batch.variances_row(k);
    double acc = 0.0;
    for (double v : row) acc += v;
    sums[k] = acc;
  }
  return sums;
}

template <class Sums>
Estimate v2_moment_impl(const Sums& sums, long m, double s2, double p) {
  if (m < 1) throw std::invalid_argument("estimate_v2_moment: empty batch");
  if (!(s2 > 0.0)) {
    throw std::invalid_argument("estimate_v2_moment: s2 must be positive");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("estimate_v2_moment: p must be >= 1");
  }
  std::vector<double> deviations(m);
  const double inv = 1.0 / s2;
  for (long k = 0; k < m; ++k) {
    deviations[k] = std::pow(std::abs(sums[k] * inv - 1.0), p);
  }
  return mean_estimate(deviations);
}

template <class Sums>
double sup_v2_impl(const Sums& sums, long m, double s2) {
  if (m < 1) {
    throw std::invalid_argument("estimate_sup_v2_deviation: empty batch");
  }
  if (!(s2 > 0.0)) {
    throw std::invalid_argument("estimate_sup_v2_deviation: s2 must be positive");
  }
  double sup = 0.0;
  for (long k = 0; k < m; ++k) {
    sup = std::max(sup, std::abs(sums[k] / s2 - 1.0));
  }
  return sup;
}

}  // namespace

Estimate estimate_s2(const PathSummary& summary) {
  if (summary.m < 1) throw std::invalid_argument("estimate_s2: empty batch");
  return mean_estimate(variance_sums(summary));
}

Estimate estimate_s2(const PathBatch& batch) {
  if (batch.m < 1) throw std::invalid_argument("estimate_s2: empty batch");
  return mean_estimate(variance_sums(batch));
}

Estimate estimate_v2_moment(const PathSummary& summary, double s2, double p) {
  return v2_moment_impl(variance_sums(summary), summary.m, s2, p);
}

Estimate estimate_v2_moment(const PathBatch& batch, double s2, double p) {
  return v2_moment_impl(variance_sums(batch), batch.m, s2, p);
}

double estimate_sup_v2_deviation(const PathSummary& summary, double s2) {
  return sup_v2_impl(variance_sums(summary), summary.m, s2);
}

double estimate_sup_v2_deviation(const PathBatch& batch, double s2) {
  return sup_v2_impl(variance_sums(batch), batch.m, s2);
}

Estimate estimate_abs_moment_sum(const PathSummary& summary, double p) {
  if (summary.m < 1) {
    throw std::invalid_argument("estimate_abs_moment_sum: empty batch");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("estimate_abs_moment_sum: p must be >= 1");
  }
  std::vector<double> sums(summary.m);
  for (long k = 0; k < summary.m; ++k) {
    sums[k] = summary.abs_moment_sum(k, p);
  }
  return mean_estimate(sums);
}

KolmogorovEstimate estimate_kolmogorov(std::span<const double> samples,
                                       double scale, double delta_conf) {
  const std::size_t m = samples.size();
  if (m == 0) {
    throw std::invalid_argument("estimate_kolmogorov: empty sample");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("estimate_kolmogorov: scale must be positive");
  }
  if (!(delta_conf > 0.0 && delta_conf < 1.0)) {
    throw std::invalid_argument("estimate_kolmogorov: confidence outside (0,1)");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double inv_m = 1.0 / static_cast<double>(m);
  const double inv_scale = 1.0 / scale;
  double sup = 0.0;
  // sup |F_hat - Phi| over the real line is attained at one side of a jump;
  // duplicate sample values only add intermediate CDF levels, which can never
  // exceed both endpoints of the jump block.
  for (std::size_t j = 0; j < m; ++j) {
    const double phi = normal_cdf(sorted[j] * inv_scale);
    sup = std::max(sup, std::abs(static_cast<double>(j) * inv_m - phi));
    sup = std::max(sup, std::abs(static_cast<double>(j + 1) * inv_m - phi));
  }
  KolmogorovEstimate out;
  out.d_hat = sup;
  out.dkw_epsilon =
      std::sqrt(std::log(2.0 / delta_conf) / (2.0 * static_cast<double>(m)));
  out.confidence = delta_conf;
  return out;
}

}  // namespace mclt
