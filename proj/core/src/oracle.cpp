#include "mclt/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "mclt/errors.hpp"
#include "mclt/numeric.hpp"

namespace mclt {

double StateDistribution::total_probability() const {
  double acc = 0.0;
  for (const auto& [key, p] : atoms) acc += p;
  return acc;
}

double StateDistribution::mean() const {
  double acc = 0.0;
  for (const auto& [key, p] : atoms) acc += p * key.value();
  return acc;
}

namespace {

struct AnnotatedKey {
  StateKey key;
  long variance_halves = 0;

  auto operator<=>(const AnnotatedKey&) const = default;
};

}  // namespace

ChainEnumeration enumerate_chain(const KernelSpec& spec, long n,
                                 long atom_budget) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("enumerate_chain: n must be >= 1");
  if (n > kEnumerationMaxSteps) {
    throw BudgetError("enumerate_chain: n = " + std::to_string(n) +
                          " exceeds the enumeration cap of " +
                          std::to_string(kEnumerationMaxSteps),
                      n);
  }
  const PreparedKernel kernel(spec, n);

  ChainEnumeration chain;
  chain.spec = spec;
  chain.n = n;
  chain.steps.reserve(n + 1);
  chain.step_variances.reserve(n);
  chain.s2_prefix.reserve(n + 1);
  chain.s2_prefix.push_back(0.0);

  std::map<AnnotatedKey, double> current;
  current[AnnotatedKey{}] = 1.0;

  auto marginal = [](const std::map<AnnotatedKey, double>& annotated,
                     long step) {
    StateDistribution dist;
    dist.step = step;
    for (const auto& [ak, p] : annotated) dist.atoms[ak.key] += p;
    return dist;
  };

  chain.steps.push_back(marginal(current, 0));

  for (long i = 1; i <= n; ++i) {
    std::map<AnnotatedKey, double> next;
    double step_variance = 0.0;
    for (const auto& [ak, p] : current) {
      const StepBranch branch = kernel.classify(i, ak.key.value());
      step_variance += p * PreparedKernel::branch_variance(branch);
      const long halves =
          ak.variance_halves + PreparedKernel::branch_variance_halves(branch);
      StateKey up = ak.key;
      StateKey down = ak.key;
      switch (branch) {
        case StepBranch::Plain:
          ++up.a;
          --down.a;
          break;
        case StepBranch::UpperBand:
          ++up.b;
          --down.b;
          break;
        case StepBranch::LowerBand:
          ++up.c;
          --down.c;
          break;
      }
      next[AnnotatedKey{up, halves}] += 0.5 * p;
      next[AnnotatedKey{down, halves}] += 0.5 * p;
      if (static_cast<long>(next.size()) > atom_budget) {
        throw BudgetError("enumerate_chain: atom budget of " +
                              std::to_string(atom_budget) +
                              " exceeded at step " + std::to_string(i),
                          i);
      }
    }
    current = std::move(next);
    chain.step_variances.push_back(step_variance);
    chain.s2_prefix.push_back(chain.s2_prefix.back() + step_variance);
    chain.steps.push_back(marginal(current, i));
  }

  chain.terminal.reserve(current.size());
  for (const auto& [ak, p] : current) {
    chain.terminal.push_back(AnnotatedAtom{ak.key, ak.variance_halves, p});
  }
  return chain;
}

double exact_kolmogorov(const StateDistribution& dist, double scale) {
  if (dist.atoms.empty()) {
    throw std::invalid_argument("exact_kolmogorov: empty distribution");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("exact_kolmogorov: scale must be positive");
  }
  std::vector<std::pair<double, double>> jumps;  // (value/scale, probability)
  jumps.reserve(dist.atoms.size());
  for (const auto& [key, p] : dist.atoms) {
    jumps.emplace_back(key.value() / scale, p);
  }
  std::sort(jumps.begin(), jumps.end());
  double sup = 0.0;
  double cdf = 0.0;
  for (const auto& [t, p] : jumps) {
    const double phi = normal_cdf(t);
    sup = std::max(sup, std::abs(cdf - phi));  // left limit F(t^-)
    cdf += p;
    sup = std::max(sup, std::abs(cdf - phi));  // jump value F(t)
  }
  return sup;
}

double exact_v2_moment(const ChainEnumeration& chain, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("exact_v2_moment: p must be >= 1");
  }
  const double s2 = chain.s2();
  double acc = 0.0;
  for (const AnnotatedAtom& atom : chain.terminal) {
    const double v2 = static_cast<double>(atom.variance_halves) / (2.0 * s2);
    acc += atom.probability * std::pow(std::abs(v2 - 1.0), p);
  }
  return acc;
}

double exact_v2_sup(const ChainEnumeration& chain) {
  const double s2 = chain.s2();
  double sup = 0.0;
  for (const AnnotatedAtom& atom : chain.terminal) {
    const double v2 = static_cast<double>(atom.variance_halves) / (2.0 * s2);
    sup = std::max(sup, std::abs(v2 - 1.0));
  }
  return sup;
}

void write_distribution_csv(std::ostream& out, const ChainEnumeration& chain) {
  out << "step,atom_a,atom_b,atom_c,probability\n";
  char buf[64];
  for (const StateDistribution& dist : chain.steps) {
    for (const auto& [key, p] : dist.atoms) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      out << dist.step << ',' << key.a << ',' << key.b << ',' << key.c << ','
          << buf << '\n';
    }
  }
}

}  // namespace mclt
