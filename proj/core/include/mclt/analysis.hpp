#pragma once

#include <string>
#include <vector>

#include "mclt/config.hpp"
#include "mclt/stats.hpp"

namespace mclt {

// One statistic tracked across an n-grid, ready for log-log fitting.
struct RatePoint {
  long n = 0;
  double value = 0.0;
  double std_error = 0.0;
};

struct RateSeries {
  std::string label;
  std::vector<RatePoint> points;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // of ln(value) on ln(n)
  double r_squared = 0.0;
};

// Bound functionals from the convergence-rate theorems, all with unit
// constant (the theory only fixes them up to a multiplicative constant;
// report output marks the values "xC").

// (v2_moment_pp + s2^{-p} * sum_2p_moments)^(1/(2p+1))
double hall_bound(double p, double v2_moment_pp, double s2,
                  double sum_2p_moments);

// n * ln(n) / s^3, the bounded-increment V^2 = 1 rate.
double bolthausen_bound(double n, double s);

// n*ln(n)/s^3 + min(v2_l1^(1/3), v2_sup^(1/2)).
double corollary_bound(double v2_l1, double v2_sup, double n, double s);

// n*ln(n)/s^3 + (v2_moment_pp + s^(-2p))^(1/(2p+1)).
double theorem3_bound(double p, double v2_moment_pp, double n, double s);

// sum_{i=1}^n (n - i + kappa^2)^(-3/2); kappa * sum stays bounded in n.
double lambda_cubed_sum(long n, double kappa);

// Unweighted OLS of ln(value) on ln(n). Needs >= 3 points, all positive.
PowerLawFit fit_power_law(const RateSeries& series);

// Per-grid-point statistics emitted by the sweep.
struct GridPointStats {
  long n = 0;
  Estimate s2;
  KolmogorovEstimate kolmogorov;
  std::vector<Estimate> v2_moments;  // parallel to config.p_values
  double v2_sup = 0.0;
  double hall = 0.0;
  double bolthausen = 0.0;
  double corollary = 0.0;
  double theorem3 = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<GridPointStats> rows;
  std::vector<RateSeries> series;  // d_hat plus one per p value
  std::vector<std::pair<std::string, PowerLawFit>> fits;
};

// For each n in the grid: an independent s^2 pass (m_s2 paths), a main pass
// (m paths), every estimator, the four bound functionals, and power-law fits
// across the grid. Grid points use sub-seeds derived from config.seed, so
// the report is a deterministic function of the config.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Label used for the |V^2-1|^p series / CSV columns: v2_p1, v2_p2, v2_p1.5.
std::string v2_series_label(double p);

}  // namespace mclt
