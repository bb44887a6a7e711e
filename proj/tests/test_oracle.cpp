#include <doctest.h>

#include <cmath>
#include <sstream>

#include "brute_force.hpp"
#include "mclt/errors.hpp"
#include "mclt/numeric.hpp"
#include "mclt/oracle.hpp"
#include "mclt/sampler.hpp"
#include "mclt/stats.hpp"

using namespace mclt;
using mclt::testing::brute_force_chain;

namespace {

const KernelSpec kPaper = KernelSpec::paper_example(0.75, 0.25);

}  // namespace

TEST_CASE("rademacher n=3 matches the binomial by hand") {
  const ChainEnumeration chain = enumerate_chain(KernelSpec::rademacher(), 3);
  CHECK(chain.s2() == 3.0);
  const StateDistribution& last = chain.steps[3];
  REQUIRE(last.atoms.size() == 4);
  CHECK(last.atoms.at(StateKey{3, 0, 0}) == 0.125);
  CHECK(last.atoms.at(StateKey{-3, 0, 0}) == 0.125);
  CHECK(last.atoms.at(StateKey{1, 0, 0}) == 0.375);
  CHECK(last.atoms.at(StateKey{-1, 0, 0}) == 0.375);
  for (long i = 0; i <= 3; ++i) {
    CHECK(chain.steps[i].total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("paper example at n=2 collapses to fair signs") {
  // n - n^alpha = 2 - 2^0.75 < 1, so the modified branch is checked at every
  // step, but no band is reachable: the law coincides with the baseline.
  const ChainEnumeration paper = enumerate_chain(kPaper, 2);
  const ChainEnumeration rad = enumerate_chain(KernelSpec::rademacher(), 2);
  CHECK(paper.s2() == 2.0);
  CHECK(paper.step_variances[0] == 1.0);
  CHECK(paper.step_variances[1] == 1.0);
  REQUIRE(paper.steps[2].atoms.size() == 3);
  for (const auto& [key, p] : rad.steps[2].atoms) {
    CHECK(paper.steps[2].atoms.at(key) == p);
  }
}

TEST_CASE("enumeration agrees with the path-by-path brute force") {
  struct Case {
    KernelSpec spec;
    long n;
  };
  const Case cases[] = {
      {KernelSpec::rademacher(), 1},  {KernelSpec::rademacher(), 2},
      {KernelSpec::rademacher(), 8},  {kPaper, 1},
      {kPaper, 2},                    {kPaper, 4},
      {kPaper, 6},                    {kPaper, 8},
      {kPaper, 10},                   {KernelSpec::paper_example(0.6, 0.27), 9},
  };
  for (const Case& c : cases) {
    CAPTURE(c.n);
    const ChainEnumeration chain = enumerate_chain(c.spec, c.n);
    const auto brute = brute_force_chain(c.spec, c.n);

    // Dyadic sums are exact in both routes, so these match bitwise.
    for (long i = 0; i < c.n; ++i) {
      CHECK(chain.step_variances[i] == brute.step_variances[i]);
      CHECK(chain.s2_prefix[i + 1] == brute.s2_prefix[i + 1]);
    }
    const double scale = std::sqrt(chain.s2());
    CHECK(exact_kolmogorov(chain.steps[c.n], scale) ==
          doctest::Approx(brute.kolmogorov(scale)).epsilon(1e-12));
    CHECK(exact_v2_moment(chain, 1.0) ==
          doctest::Approx(brute.v2_moment(1.0)).epsilon(1e-12));
    CHECK(exact_v2_moment(chain, 2.0) ==
          doctest::Approx(brute.v2_moment(2.0)).epsilon(1e-12));
    CHECK(exact_v2_sup(chain) == doctest::Approx(brute.v2_sup()).epsilon(1e-12));
  }
}

TEST_CASE("paper example n=8 regression constants") {
  // Frozen from the exhaustive 2^8-path enumeration.
  const ChainEnumeration chain = enumerate_chain(kPaper, 8);
  CHECK(chain.s2() == 7.90625);
  CHECK(chain.step_variances[6] == 0.9140625);
  CHECK(chain.step_variances[7] == 0.9921875);
  for (long i = 0; i < 6; ++i) CHECK(chain.step_variances[i] == 1.0);

  const double v8 = exact_v2_moment(chain, 1.0);
  CHECK(v8 == doctest::Approx(0.096220355731225476).epsilon(1e-14));
  const double v8_p2 = exact_v2_moment(chain, 2.0);
  CHECK(v8_p2 == doctest::Approx(0.014607320845506136).epsilon(1e-14));
  const double sup = exact_v2_sup(chain);
  CHECK(sup == doctest::Approx(0.30434782608695654).epsilon(1e-14));
  // Hoelder ordering: ||.||_2^2 <= sup * ||.||_1
  CHECK(v8_p2 <= sup * v8);
  CHECK(exact_kolmogorov(chain.steps[8], std::sqrt(chain.s2())) ==
        doctest::Approx(0.13671875).epsilon(1e-14));
}

TEST_CASE("exact_kolmogorov closed-form cases") {
  SUBCASE("point mass at zero") {
    StateDistribution dist;
    dist.step = 0;
    dist.atoms[StateKey{0, 0, 0}] = 1.0;
    CHECK(exact_kolmogorov(dist, 1.0) == 0.5);
  }
  SUBCASE("rademacher n=1: Phi(1) - 1/2") {
    const ChainEnumeration chain = enumerate_chain(KernelSpec::rademacher(), 1);
    CHECK(exact_kolmogorov(chain.steps[1], 1.0) ==
          doctest::Approx(0.3413447460685429).epsilon(1e-12));
  }
  SUBCASE("rademacher n=2 at scale sqrt(2): |3/4 - Phi(0)| = 1/4") {
    const ChainEnumeration chain = enumerate_chain(KernelSpec::rademacher(), 2);
    CHECK(exact_kolmogorov(chain.steps[2], std::sqrt(2.0)) ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("errors") {
    StateDistribution empty;
    CHECK_THROWS_AS(exact_kolmogorov(empty, 1.0), std::invalid_argument);
    StateDistribution dist;
    dist.atoms[StateKey{0, 0, 0}] = 1.0;
    CHECK_THROWS_AS(exact_kolmogorov(dist, 0.0), std::invalid_argument);
  }
}

TEST_CASE("v2 moment is identically zero for the baseline") {
  for (long n : {1L, 5L, 20L}) {
    const ChainEnumeration chain = enumerate_chain(KernelSpec::rademacher(), n);
    CHECK(exact_v2_moment(chain, 1.0) == 0.0);
    CHECK(exact_v2_moment(chain, 3.0) == 0.0);
    CHECK(exact_v2_sup(chain) == 0.0);
  }
}

TEST_CASE("every step's law is a probability distribution with mean zero") {
  for (long n : {5L, 9L, 12L}) {
    const ChainEnumeration chain = enumerate_chain(kPaper, n);
    for (long i = 0; i <= n; ++i) {
      CHECK(std::abs(chain.steps[i].total_probability() - 1.0) <= 1e-12);
      CHECK(std::abs(chain.steps[i].mean()) <= 1e-12);
    }
  }
}

TEST_CASE("enumeration budgets") {
  CHECK_THROWS_AS(enumerate_chain(KernelSpec::rademacher(), 60), BudgetError);
  try {
    enumerate_chain(kPaper, 12, /*atom_budget=*/8);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.step_index() >= 1);
    CHECK(e.step_index() <= 12);
  }
}

TEST_CASE("monte carlo estimates straddle the oracle at n=8") {
  const ChainEnumeration chain = enumerate_chain(kPaper, 8);
  const double s2 = chain.s2();
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const PathSummary batch = sample_summary(kPaper, 8, 1'000'000, RngPolicy{seed});
    const Estimate s2_hat = estimate_s2(batch);
    CHECK(std::abs(s2_hat.value - s2) <= 4.0 * s2_hat.std_error);
    for (long i = 1; i <= 8; ++i) {
      const double diff =
          std::abs(batch.step_variance_mean(i) - chain.step_variances[i - 1]);
      CHECK(diff <= 4.0 * batch.step_variance_std_error(i));
    }
    const Estimate v2 = estimate_v2_moment(batch, s2, 1.0);
    CHECK(std::abs(v2.value - exact_v2_moment(chain, 1.0)) <= 4.0 * v2.std_error);
    const KolmogorovEstimate d =
        estimate_kolmogorov(batch.terminal_sums, std::sqrt(s2), 0.01);
    CHECK(std::abs(d.d_hat - exact_kolmogorov(chain.steps[8], std::sqrt(s2))) <=
          d.dkw_epsilon);
  }
}

TEST_CASE("distribution csv lists every step with normalized rows") {
  const ChainEnumeration chain = enumerate_chain(KernelSpec::rademacher(), 3);
  std::ostringstream out;
  write_distribution_csv(out, chain);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,atom_a,atom_b,atom_c,probability");
  double total_by_step[4] = {0, 0, 0, 0};
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    int step = 0, a = 0, b = 0, c = 0;
    double p = 0;
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf", &step, &a, &b, &c, &p) == 5);
    total_by_step[step] += p;
    ++rows;
  }
  CHECK(rows == 1 + 2 + 3 + 4);
  for (double t : total_by_step) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
}
