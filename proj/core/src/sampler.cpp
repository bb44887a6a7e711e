#include "mclt/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mclt/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mclt {

namespace {

// One path, sequential in i. Steps 1..plain_steps are unconditionally fair
// signs; the two sinks let callers skip per-step work in the hot plain loop.
template <class PlainSink, class ModifiedSink>
inline double generate_path(const PreparedKernel& kernel, RngStream& rng,
                            PlainSink&& plain_sink,
                            ModifiedSink&& modified_sink) {
  SignBuffer signs(rng);
  const long n = kernel.n();
  const long plain = kernel.plain_steps();
  double s = 0.0;
  for (long i = 1; i <= plain; ++i) {
    const double x = signs.next();
    s += x;
    plain_sink(i, x);
  }
  for (long i = plain + 1; i <= n; ++i) {
    const StepBranch branch = kernel.classify(i, s);
    const double x = signs.next() * PreparedKernel::branch_magnitude(branch);
    s += x;
    modified_sink(i, x, branch);
  }
  return s;
}

// Summary-mode path: the plain phase only moves an integer random walk, so
// 64 fair signs collapse into one popcount while consuming the exact bit
// stream generate_path would. Returns the terminal sum.
template <class ModifiedSink>
inline double generate_path_reduced(const PreparedKernel& kernel,
                                    RngStream& rng,
                                    ModifiedSink&& modified_sink) {
  const long n = kernel.n();
  const long plain = kernel.plain_steps();
  double s = 0.0;
  std::uint64_t bits = 0;
  int nbits = 0;
  long remaining = plain;
  while (remaining >= 64) {
    bits = rng.next_u64();
    s += static_cast<double>(2 * std::popcount(bits) - 64);
    remaining -= 64;
  }
  if (remaining > 0) {
    bits = rng.next_u64();
    const std::uint64_t mask = (std::uint64_t{1} << remaining) - 1;
    s += static_cast<double>(
        2 * std::popcount(bits & mask) - static_cast<int>(remaining));
    bits >>= remaining;
    nbits = 64 - static_cast<int>(remaining);
  }
  for (long i = plain + 1; i <= n; ++i) {
    if (nbits == 0) {
      bits = rng.next_u64();
      nbits = 64;
    }
    const double sign = (bits & 1u) ? 1.0 : -1.0;
    bits >>= 1;
    --nbits;
    const StepBranch branch = kernel.classify(i, s);
    s += sign * PreparedKernel::branch_magnitude(branch);
    modified_sink(i, branch);
  }
  return s;
}

}  // namespace

double PathSummary::abs_moment_sum(long k, double p) const {
  const double nu = static_cast<double>(upper_counts[k]);
  const double nl = static_cast<double>(lower_counts[k]);
  const double np = static_cast<double>(n) - nu - nl;
  return np + nu * std::pow(1.5, p) + nl * std::pow(0.5, p);
}

double PathSummary::max_abs_increment(long k) const {
  if (upper_counts[k] > 0) return kUpperMagnitude;
  if (static_cast<long>(upper_counts[k]) + static_cast<long>(lower_counts[k]) <
      n) {
    return 1.0;
  }
  return kLowerMagnitude;
}

double PathSummary::step_variance_mean(long i) const {
  if (i < 1 || i > n) throw std::out_of_range("step_variance_mean: bad step");
  if (i <= plain_steps) return 1.0;
  const std::int64_t halves = step_var_halves[i - plain_steps - 1];
  return static_cast<double>(halves) / (2.0 * static_cast<double>(m));
}

double PathSummary::step_variance_std_error(long i) const {
  if (i < 1 || i > n) {
    throw std::out_of_range("step_variance_std_error: bad step");
  }
  if (i <= plain_steps || m < 2) return 0.0;
  const std::int64_t h = step_var_halves[i - plain_steps - 1];
  const std::int64_t q = step_var_halves_sq[i - plain_steps - 1];
  // Sample variance of v = h/2 entries: (sum v^2 - m*mean^2) / (m-1), with
  // sums carried as exact integers of quarter units.
  const double md = static_cast<double>(m);
  const double mean_halves = static_cast<double>(h) / md;
  const double var_quarters =
      (static_cast<double>(q) - md * mean_halves * mean_halves) /
      static_cast<double>(m - 1);
  const double var = std::max(0.0, var_quarters / 4.0);
  return std::sqrt(var / md);
}

PathBatch sample_paths(const KernelSpec& spec, long n, long m, RngPolicy policy,
                       long element_budget) {
  spec.validate();
  if (n < 1 || m < 1) {
    throw std::invalid_argument("sample_paths: need n >= 1 and m >= 1");
  }
  if (n > element_budget / m) {
    throw BudgetError("sample_paths: " + std::to_string(m) + " x " +
                      std::to_string(n) + " exceeds the element budget of " +
                      std::to_string(element_budget) +
                      "; use sample_summary for batches this large");
  }
  const PreparedKernel kernel(spec, n);

  PathBatch batch;
  batch.n = n;
  batch.m = m;
  batch.increments.resize(static_cast<std::size_t>(m) * n);
  batch.cond_variances.resize(static_cast<std::size_t>(m) * n);
  batch.terminal_sums.resize(m);

#pragma omp parallel for schedule(static)
  for (long k = 0; k < m; ++k) {
    RngStream rng(policy.master_seed, static_cast<std::uint64_t>(k),
                  kPathPhase);
    double* inc = batch.increments.data() + static_cast<std::size_t>(k) * n;
    double* var = batch.cond_variances.data() + static_cast<std::size_t>(k) * n;
    batch.terminal_sums[k] = generate_path(
        kernel, rng,
        [&](long i, double x) {
          inc[i - 1] = x;
          var[i - 1] = 1.0;
        },
        [&](long i, double x, StepBranch b) {
          inc[i - 1] = x;
          var[i - 1] = PreparedKernel::branch_variance(b);
        });
  }
  return batch;
}

PathSummary sample_summary(const KernelSpec& spec, long n, long m,
                           RngPolicy policy) {
  spec.validate();
  if (n < 1 || m < 1) {
    throw std::invalid_argument("sample_summary: need n >= 1 and m >= 1");
  }
  const PreparedKernel kernel(spec, n);
  const long plain = kernel.plain_steps();
  const long mod_steps = n - plain;

  PathSummary out;
  out.n = n;
  out.m = m;
  out.plain_steps = plain;
  out.terminal_sums.resize(m);
  out.upper_counts.assign(m, 0);
  out.lower_counts.assign(m, 0);
  out.step_var_halves.assign(mod_steps, 0);
  out.step_var_halves_sq.assign(mod_steps, 0);

  // Per-step totals are integers, so cross-thread merge order is irrelevant
  // and the result is independent of the worker count.
#pragma omp parallel
  {
    std::vector<std::int64_t> loc_halves(mod_steps, 0);
    std::vector<std::int64_t> loc_halves_sq(mod_steps, 0);

#pragma omp for schedule(static) nowait
    for (long k = 0; k < m; ++k) {
      RngStream rng(policy.master_seed, static_cast<std::uint64_t>(k),
                    kPathPhase);
      std::uint32_t upper = 0;
      std::uint32_t lower = 0;
      out.terminal_sums[k] = generate_path_reduced(
          kernel, rng, [&](long i, StepBranch b) {
            const int h = PreparedKernel::branch_variance_halves(b);
            loc_halves[i - plain - 1] += h;
            loc_halves_sq[i - plain - 1] += h * h;
            if (b == StepBranch::UpperBand) ++upper;
            else if (b == StepBranch::LowerBand) ++lower;
          });
      out.upper_counts[k] = upper;
      out.lower_counts[k] = lower;
    }

#pragma omp critical(mclt_summary_merge)
    {
      for (long j = 0; j < mod_steps; ++j) {
        out.step_var_halves[j] += loc_halves[j];
        out.step_var_halves_sq[j] += loc_halves_sq[j];
      }
    }
  }
  return out;
}

PathSummary summarize(const PathBatch& batch) {
  PathSummary out;
  out.n = batch.n;
  out.m = batch.m;
  out.plain_steps = 0;  // no kernel context: keep per-step stats for all steps
  out.terminal_sums = batch.terminal_sums;
  out.upper_counts.assign(batch.m, 0);
  out.lower_counts.assign(batch.m, 0);
  out.step_var_halves.assign(batch.n, 0);
  out.step_var_halves_sq.assign(batch.n, 0);
  for (long k = 0; k < batch.m; ++k) {
    const double* var =
        batch.cond_variances.data() + static_cast<std::size_t>(k) * batch.n;
    std::uint32_t upper = 0;
    std::uint32_t lower = 0;
    for (long i = 0; i < batch.n; ++i) {
      int h = 2;
      if (var[i] == 1.5) {
        ++upper;
        h = 3;
      } else if (var[i] == 0.5) {
        ++lower;
        h = 1;
      } else if (var[i] != 1.0) {
        throw std::invalid_argument(
            "summarize: conditional variance outside {1/2, 1, 3/2}");
      }
      out.step_var_halves[i] += h;
      out.step_var_halves_sq[i] += h * h;
    }
    out.upper_counts[k] = upper;
    out.lower_counts[k] = lower;
  }
  return out;
}

std::vector<double> running_sum_prefixes(const PathBatch& batch, long i) {
  if (i < 0 || i > batch.n) {
    throw std::out_of_range("running_sum_prefixes: index " + std::to_string(i) +
                            " outside [0, " + std::to_string(batch.n) + "]");
  }
  std::vector<double> sums(batch.m, 0.0);
  if (i == 0) return sums;
  if (i == batch.n) return batch.terminal_sums;
  for (long k = 0; k < batch.m; ++k) {
    const double* inc =
        batch.increments.data() + static_cast<std::size_t>(k) * batch.n;
    double s = 0.0;
    for (long j = 0; j < i; ++j) s += inc[j];
    sums[k] = s;
  }
  return sums;
}

namespace {

void put_u64le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(v >> (8 * b));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
  return v;
}

std::uint64_t double_bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, 8);
  return u;
}

double bits_double(std::uint64_t u) {
  double d;
  std::memcpy(&d, &u, 8);
  return d;
}

}  // namespace

void write_path_batch(std::ostream& out, const PathBatch& batch,
                      std::uint64_t seed) {
  put_u64le(out, static_cast<std::uint64_t>(batch.n));
  put_u64le(out, static_cast<std::uint64_t>(batch.m));
  put_u64le(out, seed);
  for (double x : batch.increments) put_u64le(out, double_bits(x));
}

PathBatch read_path_batch(std::istream& in, std::uint64_t* seed_out) {
  PathBatch batch;
  batch.n = static_cast<long>(get_u64le(in));
  batch.m = static_cast<long>(get_u64le(in));
  const std::uint64_t seed = get_u64le(in);
  if (seed_out != nullptr) *seed_out = seed;
  if (batch.n < 0 || batch.m < 0) {
    throw std::runtime_error("read_path_batch: corrupt header");
  }
  const std::size_t total = static_cast<std::size_t>(batch.n) * batch.m;
  batch.increments.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    batch.increments[i] = bits_double(get_u64le(in));
  }
  if (!in) throw std::runtime_error("read_path_batch: truncated stream");
  // Increment magnitudes identify the conditional variance class exactly.
  batch.cond_variances.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double a = std::abs(batch.increments[i]);
    batch.cond_variances[i] = a == kUpperMagnitude ? 1.5
                            : a == kLowerMagnitude ? 0.5
                            : a == 1.0             ? 1.0
                                                   : a * a;
  }
  batch.terminal_sums.resize(batch.m);
  for (long k = 0; k < batch.m; ++k) {
    const double* inc =
        batch.increments.data() + static_cast<std::size_t>(k) * batch.n;
    double s = 0.0;
    for (long i = 0; i < batch.n; ++i) s += inc[i];
    batch.terminal_sums[k] = s;
  }
  return batch;
}

}  // namespace mclt
