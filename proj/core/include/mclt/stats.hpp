#pragma once

#include <span>

#include "mclt/sampler.hpp"

namespace mclt {

// Mean-type Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  long m = 0;
};

// Empirical Kolmogorov distance with a distribution-free DKW confidence
// radius: the empirical CDF deviates from the sampled law by more than
// dkw_epsilon with probability at most `confidence`.
struct KolmogorovEstimate {
  double d_hat = 0.0;
  double dkw_epsilon = 0.0;
  double confidence = 0.0;
};

// Unbiased estimate of s^2 = sum_i E[X_i^2]: mean over paths of the
// accumulated conditional variance (the tower property does the rest).
Estimate estimate_s2(const PathSummary& summary);
Estimate estimate_s2(const PathBatch& batch);

// Mean over paths of |V^2 - 1|^p with V^2 = (accumulated conditional
// variance) / s2. s2 is supplied externally: either the exact value or an
// estimate from an independent batch (two-pass protocol).
Estimate estimate_v2_moment(const PathSummary& summary, double s2, double p);
Estimate estimate_v2_moment(const PathBatch& batch, double s2, double p);

// sup over sampled paths of |V^2 - 1|; a lower bound for the essential sup.
double estimate_sup_v2_deviation(const PathSummary& summary, double s2);
double estimate_sup_v2_deviation(const PathBatch& batch, double s2);

// Estimate of sum_i E|X_i|^{2p} (the Hall bound's moment sum).
Estimate estimate_abs_moment_sum(const PathSummary& summary, double p);

// Exact sup over the empirical jump points of |F_hat - Phi|, both sides of
// every jump; samples are standardized by 1/scale. delta_conf sets the DKW
// radius sqrt(ln(2/delta)/(2m)).
KolmogorovEstimate estimate_kolmogorov(std::span<const double> samples,
                                       double scale, double delta_conf = 0.01);

}  // namespace mclt
