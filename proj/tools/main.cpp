#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mclt/analysis.hpp"
#include "mclt/augment.hpp"
#include "mclt/errors.hpp"
#include "mclt/oracle.hpp"
#include "mclt/sampler.hpp"
#include "mclt/stats.hpp"
#include "report_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitCheck = 4;

using nlohmann::json;

struct KernelFlags {
  std::string variant = "rademacher";
  double alpha = 0.75;
  double beta = 0.25;

  mclt::KernelSpec spec() const {
    if (variant == "rademacher") return mclt::KernelSpec::rademacher();
    if (variant == "paper_example") {
      return mclt::KernelSpec::paper_example(alpha, beta);
    }
    throw mclt::ConfigError("unknown kernel variant '" + variant + "'");
  }
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& flags) {
  cmd->add_option("--variant", flags.variant,
                  "kernel variant: rademacher | paper_example")
      ->check(CLI::IsMember({"rademacher", "paper_example"}));
  cmd->add_option("--alpha", flags.alpha, "paper_example alpha in (1/2, 1)");
  cmd->add_option("--beta", flags.beta,
                  "paper_example band-width exponent (kappa = n^beta)");
}

int cmd_simulate(const std::string& config_path,
                 std::optional<std::uint64_t> seed,
                 std::optional<std::string> out,
                 std::optional<std::string> format, bool check) {
  mclt::ExperimentConfig config = mclt::load_config_file(config_path);
  if (seed) config.seed = *seed;
  if (out) config.output_path = *out;
  if (format) {
    if (*format == "csv") config.output_format = mclt::OutputFormat::Csv;
    else if (*format == "json") config.output_format = mclt::OutputFormat::Json;
    else throw mclt::ConfigError("--format must be csv or json");
  }
  config.validate();

  const mclt::ExperimentReport report = mclt::run_experiment(config);
  for (const std::string& path : mclt::cli::write_report_files(report)) {
    std::cout << "wrote " << path << '\n';
  }
  for (const auto& [label, fit] : report.fits) {
    std::cout << label << ": slope " << mclt::cli::format_double(fit.slope)
              << ", r^2 " << mclt::cli::format_double(fit.r_squared) << '\n';
  }
  if (check) {
    const std::vector<std::string> failures = mclt::cli::check_report(report);
    for (const std::string& f : failures) std::cout << "check failed: " << f << '\n';
    if (!failures.empty()) return kExitCheck;
    std::cout << "all checks passed\n";
  }
  return kExitOk;
}

int cmd_oracle(const KernelFlags& kernel, long n, std::vector<double> p_values,
               const std::string& out_base) {
  if (p_values.empty()) p_values = {1.0, 2.0};
  const mclt::ChainEnumeration chain = mclt::enumerate_chain(kernel.spec(), n);

  const std::string csv_path = out_base + ".csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  mclt::write_distribution_csv(csv, chain);

  json j;
  j["n"] = n;
  j["s2"] = chain.s2();
  j["s2_prefix"] = chain.s2_prefix;
  j["step_variances"] = chain.step_variances;
  const double scale = std::sqrt(chain.s2());
  j["d"] = mclt::exact_kolmogorov(chain.steps.back(), scale);
  json moments;
  for (double p : p_values) {
    moments[mclt::cli::format_double(p)] = mclt::exact_v2_moment(chain, p);
  }
  j["v2_moments"] = moments;
  j["v2_sup"] = mclt::exact_v2_sup(chain);
  const std::string json_path = out_base + ".json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << j.dump(2) << '\n';

  std::cout << "wrote " << csv_path << '\n' << "wrote " << json_path << '\n';
  return kExitOk;
}

int cmd_rates(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw mclt::ConfigError("cannot open '" + in_path + "'");
  const std::vector<mclt::RateSeries> series = mclt::cli::read_rate_series_csv(in);
  json fits;
  for (const mclt::RateSeries& s : series) {
    if (s.points.size() < 3) continue;
    bool positive = true;
    for (const mclt::RatePoint& pt : s.points) positive = positive && pt.value > 0.0;
    if (!positive) continue;
    const mclt::PowerLawFit fit = mclt::fit_power_law(s);
    fits[s.label] = {{"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"r_squared", fit.r_squared}};
  }
  json j;
  j["fits"] = fits;
  const std::string text = j.dump(2);
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text << '\n';
    std::cout << "wrote " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_augment_check(const KernelFlags& kernel, long n, long m, double gamma,
                      std::uint64_t seed) {
  const mclt::KernelSpec spec = kernel.spec();
  if (gamma < spec.max_increment()) {
    throw mclt::ConfigError(
        "gamma " + std::to_string(gamma) + " is below the kernel's largest "
        "increment " + std::to_string(spec.max_increment()));
  }
  const mclt::PathBatch batch = mclt::sample_paths(spec, n, m, mclt::RngPolicy{seed});
  const mclt::PathSummary s2_pass = mclt::sample_summary(
      spec, n, std::max<long>(m, 100'000), mclt::RngPolicy{mclt::derive_seed(seed, 1)});
  const double s2 = mclt::estimate_s2(s2_pass).value;

  long pass_v2 = 0, pass_length = 0, pass_bound = 0, pass_prefix = 0;
  for (long k = 0; k < m; ++k) {
    mclt::RngStream stream(seed, static_cast<std::uint64_t>(k), mclt::kAugmentPhase);
    const mclt::AugmentResult res = mclt::augment_path(
        batch.increments_row(k), batch.variances_row(k), s2, gamma, stream);
    if (mclt::verify_v2_one(res, s2)) ++pass_v2;
    if (res.increments.size() == static_cast<std::size_t>(2 * n)) ++pass_length;
    double max_abs = 0.0;
    for (double x : res.increments) max_abs = std::max(max_abs, std::abs(x));
    if (max_abs <= gamma) ++pass_bound;
    bool prefix_ok = true;
    for (long i = 0; i < res.tau; ++i) {
      prefix_ok = prefix_ok && res.increments[i] == batch.increments_row(k)[i];
    }
    if (prefix_ok) ++pass_prefix;
  }
  std::cout << "paths: " << m << '\n'
            << "v2_equals_one: " << pass_v2 << "/" << m << '\n'
            << "length_2n: " << pass_length << "/" << m << '\n'
            << "increment_bound: " << pass_bound << "/" << m << '\n'
            << "prefix_equality: " << pass_prefix << "/" << m << '\n';
  const bool all = pass_v2 == m && pass_length == m && pass_bound == m &&
                   pass_prefix == m;
  std::cout << (all ? "PASS" : "FAIL") << '\n';
  return all ? kExitOk : kExitCheck;
}

int cmd_bounds(double p, std::optional<double> v2_moment_pp,
               std::optional<double> s2, std::optional<double> sum_2p,
               std::optional<double> n, std::optional<double> s,
               std::optional<double> v2_l1, std::optional<double> v2_sup) {
  json j;
  j["bound_constant"] = "xC";
  if (v2_moment_pp && s2 && sum_2p) {
    j["hall_bound"] = mclt::hall_bound(p, *v2_moment_pp, *s2, *sum_2p);
  }
  if (n && s) {
    j["bolthausen_bound"] = mclt::bolthausen_bound(*n, *s);
    if (v2_l1 && v2_sup) {
      j["corollary_bound"] = mclt::corollary_bound(*v2_l1, *v2_sup, *n, *s);
    }
    if (v2_moment_pp) {
      j["theorem3_bound"] = mclt::theorem3_bound(p, *v2_moment_pp, *n, *s);
    }
  }
  if (j.size() <= 1) {
    throw mclt::ConfigError(
        "bounds: supply --v2-moment-pp/--s2/--sum-2p and/or --n/--s "
        "(plus --v2-l1/--v2-sup for the corollary bound)");
  }
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"martingale CLT convergence-rate laboratory"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "run the Monte Carlo sweep described by a JSON config");
  std::string config_path;
  simulate->add_option("--config", config_path, "JSON config file")->required();
  std::optional<std::uint64_t> seed_override;
  simulate->add_option("--seed", seed_override, "override config.seed");
  std::optional<std::string> out_override;
  simulate->add_option("--out", out_override, "override output base path");
  std::optional<std::string> format_override;
  simulate->add_option("--format", format_override, "override format: csv|json");
  bool check = false;
  simulate->add_flag("--check", check, "verify rate thresholds, exit 4 on failure");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "exact enumeration of a small chain (distribution + statistics)");
  KernelFlags oracle_kernel;
  oracle_kernel.variant = "paper_example";
  add_kernel_flags(oracle, oracle_kernel);
  long oracle_n = 8;
  oracle->add_option("--n", oracle_n, "chain length (enumeration-capped)")->required();
  std::vector<double> oracle_p;
  oracle->add_option("--p", oracle_p, "moment orders for |V^2-1|^p");
  std::string oracle_out = "oracle";
  oracle->add_option("--out", oracle_out, "output base path");

  // rates
  auto* rates = app.add_subcommand("rates", "fit power laws to an existing statistics CSV");
  std::string rates_in;
  rates->add_option("--in", rates_in, "statistics CSV from simulate")->required();
  std::string rates_out;
  rates->add_option("--out", rates_out, "output JSON path (default: stdout)");

  // augment-check
  auto* augment = app.add_subcommand(
      "augment-check", "batch-verify the variance-completing augmentation");
  KernelFlags augment_kernel;
  augment_kernel.variant = "paper_example";
  add_kernel_flags(augment, augment_kernel);
  long augment_n = 256;
  long augment_m = 10'000;
  double augment_gamma = 2.0;
  std::uint64_t augment_seed = 0;
  augment->add_option("--n", augment_n, "path length");
  augment->add_option("--m", augment_m, "path count");
  augment->add_option("--gamma", augment_gamma, "increment bound");
  augment->add_option("--seed", augment_seed, "master seed");

  // bounds
  auto* bounds = app.add_subcommand(
      "bounds", "evaluate the bound functionals from explicit moment values");
  double bounds_p = 1.0;
  bounds->add_option("--p", bounds_p, "moment order p >= 1");
  std::optional<double> b_v2pp, b_s2, b_sum2p, b_n, b_s, b_v2l1, b_v2sup;
  bounds->add_option("--v2-moment-pp", b_v2pp, "||V^2-1||_p^p");
  bounds->add_option("--s2", b_s2, "total variance s^2");
  bounds->add_option("--sum-2p", b_sum2p, "sum_i E|X_i|^{2p}");
  bounds->add_option("--n", b_n, "sequence length");
  bounds->add_option("--s", b_s, "scale s = sqrt(s^2)");
  bounds->add_option("--v2-l1", b_v2l1, "||V^2-1||_1");
  bounds->add_option("--v2-sup", b_v2sup, "||V^2-1||_inf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(config_path, seed_override, out_override,
                          format_override, check);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_kernel, oracle_n, oracle_p, oracle_out);
    }
    if (rates->parsed()) return cmd_rates(rates_in, rates_out);
    if (augment->parsed()) {
      return cmd_augment_check(augment_kernel, augment_n, augment_m,
                               augment_gamma, augment_seed);
    }
    if (bounds->parsed()) {
      return cmd_bounds(bounds_p, b_v2pp, b_s2, b_sum2p, b_n, b_s, b_v2l1,
                        b_v2sup);
    }
  } catch (const mclt::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const mclt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
