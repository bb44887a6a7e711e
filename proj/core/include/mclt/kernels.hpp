#pragma once

#include <cmath>
#include <vector>

namespace mclt {

// Conditional-increment kernels for two martingale-difference constructions:
//   Rademacher    — i.i.d. fair signs, the baseline chain.
//   PaperExample  — fair signs for the first n - n^alpha steps, after which
//                   the increment magnitude is bumped to sqrt(3/2) when the
//                   partial sum sits in the band [lambda, 2*lambda] and
//                   damped to sqrt(1/2) in [-2*lambda, -lambda], with
//                   lambda = sqrt(n - i + kappa^2) and kappa = n^beta.
// Both kernels are martingale differences with |X| <= 2 at every state.

enum class KernelVariant { Rademacher, PaperExample };

inline const double kUpperMagnitude = std::sqrt(1.5);
inline const double kLowerMagnitude = std::sqrt(0.5);

struct KernelSpec {
  KernelVariant variant = KernelVariant::Rademacher;
  double alpha = 0.0;  // PaperExample only, 1/2 < alpha < 1
  double beta = 0.0;   // PaperExample only, 1 - alpha < 2*beta < alpha

  static KernelSpec rademacher() { return KernelSpec{}; }
  static KernelSpec paper_example(double alpha, double beta = 0.25) {
    KernelSpec spec;
    spec.variant = KernelVariant::PaperExample;
    spec.alpha = alpha;
    spec.beta = beta;
    return spec;
  }

  // Throws std::invalid_argument when the parameters are outside the
  // admissible range.
  void validate() const;

  // Largest increment magnitude the kernel can emit.
  double max_increment() const {
    return variant == KernelVariant::Rademacher ? 1.0 : kUpperMagnitude;
  }

  bool operator==(const KernelSpec&) const = default;
};

// Finite discrete law of one conditional increment.
struct IncrementDistribution {
  struct Atom {
    double value = 0.0;
    double probability = 0.0;
  };
  std::vector<Atom> atoms;

  double mean() const;
  double second_moment() const;
};

// The interval [lambda, 2*lambda]; membership of -x covers the mirrored band.
struct Bands {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return x >= lower && x <= upper; }
};

// lambda = sqrt(n - i + kappa^2) for 1 <= i <= n, kappa > 0.
double lambda_ni(long n, long i, double kappa);

Bands bands_ni(long n, long i, double kappa);

// Which of the three kernel cases applies at a state.
enum class StepBranch { Plain, UpperBand, LowerBand };

// Per-(spec, n) evaluation context: the branch threshold n - n^alpha and
// kappa^2 are fixed once so the per-step work is a sqrt and two compares.
class PreparedKernel {
 public:
  PreparedKernel(const KernelSpec& spec, long n);

  long n() const { return n_; }

  // Steps 1..plain_steps() take the plain branch at every state.
  long plain_steps() const { return plain_steps_; }

  double kappa() const { return kappa_; }

  StepBranch classify(long i, double s_prev) const {
    if (i <= plain_cutoff_) return StepBranch::Plain;
    const double lam = std::sqrt(static_cast<double>(n_ - i) + kappa_sq_);
    if (s_prev >= lam && s_prev <= 2.0 * lam) return StepBranch::UpperBand;
    if (s_prev >= -2.0 * lam && s_prev <= -lam) return StepBranch::LowerBand;
    return StepBranch::Plain;
  }

  static double branch_magnitude(StepBranch b) {
    switch (b) {
      case StepBranch::UpperBand: return kUpperMagnitude;
      case StepBranch::LowerBand: return kLowerMagnitude;
      default: return 1.0;
    }
  }

  // Exact conditional second moment: 3/2, 1/2 or 1.
  static double branch_variance(StepBranch b) {
    switch (b) {
      case StepBranch::UpperBand: return 1.5;
      case StepBranch::LowerBand: return 0.5;
      default: return 1.0;
    }
  }

  // Conditional variance in half units (2*v), exact integers {3, 1, 2}.
  static int branch_variance_halves(StepBranch b) {
    switch (b) {
      case StepBranch::UpperBand: return 3;
      case StepBranch::LowerBand: return 1;
      default: return 2;
    }
  }

  void check_step(long i) const;

 private:
  long n_ = 0;
  long plain_steps_ = 0;    // min(n, floor(n - n^alpha)), clamped to [0, n]
  double plain_cutoff_ = 0; // the real threshold n - n^alpha (+inf baseline)
  double kappa_ = 0.0;
  double kappa_sq_ = 0.0;
};

// The conditional law of X_{ni} given S_{n,i-1} = s_prev: two atoms with
// probability 1/2 each.
IncrementDistribution conditional_law(const KernelSpec& spec, long n, long i,
                                      double s_prev);

// Exact second moment of the conditional law at the same state.
double conditional_variance(const KernelSpec& spec, long n, long i,
                            double s_prev);

}  // namespace mclt
