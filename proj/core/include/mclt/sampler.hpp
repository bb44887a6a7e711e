#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mclt/kernels.hpp"
#include "mclt/rng.hpp"

namespace mclt {

// Stream derivation rule: path k draws from an RngStream keyed by
// (master_seed, k, phase). Phase 0 is path generation; other phases are
// reserved for per-path transforms that need fresh randomness.
struct RngPolicy {
  std::uint64_t master_seed = 0;
};

inline constexpr std::uint64_t kPathPhase = 0;
inline constexpr std::uint64_t kAugmentPhase = 1;

// Full m-by-n batch: every increment plus the exact conditional variance
// realized along each sampled history.
struct PathBatch {
  long n = 0;
  long m = 0;
  std::vector<double> increments;      // m x n, row-major
  std::vector<double> cond_variances;  // m x n, row-major
  std::vector<double> terminal_sums;   // length m

  std::span<const double> increments_row(long k) const {
    return {increments.data() + static_cast<std::size_t>(k) * n,
            static_cast<std::size_t>(n)};
  }
  std::span<const double> variances_row(long k) const {
    return {cond_variances.data() + static_cast<std::size_t>(k) * n,
            static_cast<std::size_t>(n)};
  }
};

// Reduced representation for batches too large to keep in full. Increment
// magnitudes take one of three values, so per-path band-step counts recover
// the accumulated conditional variance and all |X|^{2p} sums exactly.
struct PathSummary {
  long n = 0;
  long m = 0;
  // Steps 1..plain_steps take the plain branch for every path; the per-step
  // arrays below cover only steps plain_steps+1..n.
  long plain_steps = 0;
  std::vector<double> terminal_sums;          // length m
  std::vector<std::uint32_t> upper_counts;    // length m, steps with v = 3/2
  std::vector<std::uint32_t> lower_counts;    // length m, steps with v = 1/2
  std::vector<std::int64_t> step_var_halves;  // per step: sum over paths of 2v
  std::vector<std::int64_t> step_var_halves_sq;  // per step: sum of (2v)^2

  // Accumulated conditional variance of path k (exact half-integer).
  double variance_sum(long k) const {
    return static_cast<double>(n) +
           (static_cast<double>(upper_counts[k]) -
            static_cast<double>(lower_counts[k])) / 2.0;
  }

  // Sum over steps of |X_i|^{2p} for path k, exact given the step counts.
  double abs_moment_sum(long k, double p) const;

  double max_abs_increment(long k) const;

  // Mean / standard error of the conditional variance at step i (1-based)
  // across paths. Exact integer arithmetic until the final division.
  double step_variance_mean(long i) const;
  double step_variance_std_error(long i) const;
};

// Elements per matrix allowed in a full PathBatch (~0.5 GiB per array).
inline constexpr long kDefaultElementBudget = 1L << 26;

// Samples m paths of length n, storing every increment. Deterministic in
// (spec, n, m, policy.master_seed); identical output for any worker count.
// Throws BudgetError when m*n exceeds element_budget.
PathBatch sample_paths(const KernelSpec& spec, long n, long m, RngPolicy policy,
                       long element_budget = kDefaultElementBudget);

// Streaming variant: same paths as sample_paths, reduced on the fly.
PathSummary sample_summary(const KernelSpec& spec, long n, long m,
                           RngPolicy policy);

// Reduces a full batch to the summary representation.
PathSummary summarize(const PathBatch& batch);

// Partial sums S_{n,i} per path; i = 0 gives zeros, i = n the terminal sums.
std::vector<double> running_sum_prefixes(const PathBatch& batch, long i);

// Debug dump: header (n, m, seed as little-endian u64) then the increment
// matrix as row-major little-endian doubles.
void write_path_batch(std::ostream& out, const PathBatch& batch,
                      std::uint64_t seed);
PathBatch read_path_batch(std::istream& in, std::uint64_t* seed_out = nullptr);

}  // namespace mclt
