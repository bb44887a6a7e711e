#pragma once

#include <cmath>
#include <compare>
#include <iosfwd>
#include <map>
#include <vector>

#include "mclt/kernels.hpp"

namespace mclt {

// Exact representation of a reachable partial-sum value. Increments lie in
// {+-1, +-sqrt(3/2), +-sqrt(1/2)}, and those three magnitudes are rationally
// independent, so the integer triple is a canonical key with no float
// collisions.
struct StateKey {
  int a = 0;  // multiples of 1
  int b = 0;  // multiples of sqrt(3/2)
  int c = 0;  // multiples of sqrt(1/2)

  double value() const {
    return static_cast<double>(a) + static_cast<double>(b) * kUpperMagnitude +
           static_cast<double>(c) * kLowerMagnitude;
  }

  auto operator<=>(const StateKey&) const = default;
};

// Exact law of S_{ni} at one step; probabilities are dyadic rationals and
// stay exact in binary floating point for the supported depths.
struct StateDistribution {
  long step = 0;
  std::map<StateKey, double> atoms;

  double total_probability() const;
  double mean() const;
};

// Terminal state annotated with its accumulated conditional variance,
// carried as an integer count of half units so merging is exact.
struct AnnotatedAtom {
  StateKey key;
  long variance_halves = 0;
  double probability = 0.0;
};

struct ChainEnumeration {
  KernelSpec spec;
  long n = 0;
  std::vector<StateDistribution> steps;   // index 0..n
  std::vector<double> step_variances;     // E[X_{ni}^2], index 1..n at [i-1]
  std::vector<double> s2_prefix;          // s^2(X_{n,i}), index 0..n
  std::vector<AnnotatedAtom> terminal;    // variance-annotated step-n law

  double s2() const { return s2_prefix[static_cast<std::size_t>(n)]; }
};

inline constexpr long kEnumerationMaxSteps = 40;
inline constexpr long kEnumerationAtomBudget = 10'000'000;

// Pushes the exact state distribution through the kernel step by step.
// Throws BudgetError when n exceeds the enumeration cap or the annotated
// atom count passes atom_budget (the error names the offending step).
ChainEnumeration enumerate_chain(const KernelSpec& spec, long n,
                                 long atom_budget = kEnumerationAtomBudget);

// Exact Kolmogorov distance sup_t |F(t) - Phi(t)| of dist scaled by 1/scale.
// F is a step function, so the sup is attained at a jump point, checked from
// both sides.
double exact_kolmogorov(const StateDistribution& dist, double scale);

// E|V^2 - 1|^p over the variance-annotated terminal law.
double exact_v2_moment(const ChainEnumeration& chain, double p);

// max |V^2 - 1| over every reachable history.
double exact_v2_sup(const ChainEnumeration& chain);

// step, atom_a, atom_b, atom_c, probability rows for all steps.
void write_distribution_csv(std::ostream& out, const ChainEnumeration& chain);

}  // namespace mclt
