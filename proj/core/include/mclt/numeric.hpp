#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace mclt {

// Standard normal CDF, full double precision via erfc.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// Order-fixed pairwise summation: the reduction tree depends only on the
// element order, never on thread count, so results are reproducible.
double pairwise_sum(std::span<const double> values);

// Mean and standard error of the mean over a sample, pairwise-summed.
struct MeanStdError {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanStdError mean_std_error(std::span<const double> values);

}  // namespace mclt
