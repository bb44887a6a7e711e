#include "mclt/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mclt/rng.hpp"
#include "mclt/sampler.hpp"

namespace mclt {

double hall_bound(double p, double v2_moment_pp, double s2,
                  double sum_2p_moments) {
  if (!(p >= 1.0)) throw std::invalid_argument("hall_bound: p must be >= 1");
  if (v2_moment_pp < 0.0 || sum_2p_moments < 0.0) {
    throw std::invalid_argument("hall_bound: moments must be nonnegative");
  }
  if (!(s2 > 0.0)) throw std::invalid_argument("hall_bound: s2 must be positive");
  const double inner = v2_moment_pp + std::pow(s2, -p) * sum_2p_moments;
  return std::pow(inner, 1.0 / (2.0 * p + 1.0));
}

double bolthausen_bound(double n, double s) {
  if (!(n >= 2.0)) {
    throw std::invalid_argument("bolthausen_bound: n must be >= 2");
  }
  if (!(s > 0.0)) {
    throw std::invalid_argument("bolthausen_bound: s must be positive");
  }
  return n * std::log(n) / (s * s * s);
}

double corollary_bound(double v2_l1, double v2_sup, double n, double s) {
  if (v2_l1 < 0.0 || v2_sup < 0.0) {
    throw std::invalid_argument("corollary_bound: moments must be nonnegative");
  }
  return bolthausen_bound(n, s) +
         std::min(std::cbrt(v2_l1), std::sqrt(v2_sup));
}

double theorem3_bound(double p, double v2_moment_pp, double n, double s) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("theorem3_bound: p must be >= 1");
  }
  if (v2_moment_pp < 0.0) {
    throw std::invalid_argument("theorem3_bound: moment must be nonnegative");
  }
  return bolthausen_bound(n, s) +
         std::pow(v2_moment_pp + std::pow(s, -2.0 * p), 1.0 / (2.0 * p + 1.0));
}

double lambda_cubed_sum(long n, double kappa) {
  if (n < 1) throw std::invalid_argument("lambda_cubed_sum: n must be >= 1");
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("lambda_cubed_sum: kappa must be positive");
  }
  const double kappa_sq = kappa * kappa;
  // i = n contributes the largest term; summing from i = 1 keeps the
  // accumulation in increasing magnitude.
  double acc = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double lam_sq = static_cast<double>(n - i) + kappa_sq;
    acc += 1.0 / (lam_sq * std::sqrt(lam_sq));
  }
  return acc;
}

PowerLawFit fit_power_law(const RateSeries& series) {
  const std::size_t count = series.points.size();
  if (count < 3) {
    throw std::invalid_argument("fit_power_law: need at least 3 points");
  }
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(count), ly(count);
  for (std::size_t i = 0; i < count; ++i) {
    const RatePoint& pt = series.points[i];
    if (pt.n < 1 || !(pt.value > 0.0)) {
      throw std::invalid_argument(
          "fit_power_law: points need n >= 1 and value > 0");
    }
    lx[i] = std::log(static_cast<double>(pt.n));
    ly[i] = std::log(pt.value);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("fit_power_law: degenerate n grid");
  }
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;  // constant series, fitted exactly by slope 0
  } else {
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

std::string v2_series_label(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v2_p%g", p);
  return buf;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  RateSeries d_series{"d_hat", {}};
  std::vector<RateSeries> v2_series;
  v2_series.reserve(config.p_values.size());
  for (double p : config.p_values) {
    v2_series.push_back(RateSeries{v2_series_label(p), {}});
  }

  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const long n = config.n_grid[gi];
    // Independent streams per grid point and per pass (two-pass protocol).
    const RngPolicy s2_policy{derive_seed(config.seed, static_cast<std::uint64_t>(n), 1)};
    const RngPolicy main_policy{derive_seed(config.seed, static_cast<std::uint64_t>(n), 2)};

    const PathSummary s2_pass = sample_summary(config.kernel, n, config.m_s2, s2_policy);
    const Estimate s2 = estimate_s2(s2_pass);
    const PathSummary main_pass = sample_summary(config.kernel, n, config.m, main_policy);

    GridPointStats row;
    row.n = n;
    row.s2 = s2;
    const double scale = std::sqrt(s2.value);
    row.kolmogorov =
        estimate_kolmogorov(main_pass.terminal_sums, scale, config.confidence);
    for (double p : config.p_values) {
      row.v2_moments.push_back(estimate_v2_moment(main_pass, s2.value, p));
    }
    row.v2_sup = estimate_sup_v2_deviation(main_pass, s2.value);

    // Bound functionals are evaluated at the first requested p.
    const double p0 = config.p_values.front();
    const Estimate sum_2p = estimate_abs_moment_sum(main_pass, p0);
    const Estimate v2_l1 = p0 == 1.0
                               ? row.v2_moments.front()
                               : estimate_v2_moment(main_pass, s2.value, 1.0);
    row.hall = hall_bound(p0, row.v2_moments.front().value, s2.value, sum_2p.value);
    if (n >= 2) {
      row.bolthausen = bolthausen_bound(static_cast<double>(n), scale);
      row.corollary = corollary_bound(v2_l1.value, row.v2_sup,
                                      static_cast<double>(n), scale);
      row.theorem3 = theorem3_bound(p0, row.v2_moments.front().value,
                                    static_cast<double>(n), scale);
    }

    d_series.points.push_back(
        RatePoint{n, row.kolmogorov.d_hat, row.kolmogorov.dkw_epsilon});
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      v2_series[pi].points.push_back(RatePoint{n, row.v2_moments[pi].value,
                                               row.v2_moments[pi].std_error});
    }
    report.rows.push_back(std::move(row));
  }

  report.series.push_back(std::move(d_series));
  for (RateSeries& s : v2_series) report.series.push_back(std::move(s));

  for (const RateSeries& s : report.series) {
    bool fittable = s.points.size() >= 3;
    for (const RatePoint& pt : s.points) fittable = fittable && pt.value > 0.0;
    if (fittable) report.fits.emplace_back(s.label, fit_power_law(s));
  }
  return report;
}

}  // namespace mclt
