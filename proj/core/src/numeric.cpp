#include "mclt/numeric.hpp"

#include <stdexcept>

namespace mclt {

namespace {

double pairwise_sum_impl(const double* data, std::size_t count) {
  if (count <= 32) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

MeanStdError mean_std_error(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m == 0) throw std::invalid_argument("mean_std_error: empty sample");
  MeanStdError out;
  out.mean = pairwise_sum(values) / static_cast<double>(m);
  if (m == 1) return out;
  // Two-pass variance keeps the degenerate (constant) case exactly zero.
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = values[i] - out.mean;
    acc += d * d;
  }
  const double var = acc / static_cast<double>(m - 1);
  out.std_error = std::sqrt(var / static_cast<double>(m));
  return out;
}

}  // namespace mclt
