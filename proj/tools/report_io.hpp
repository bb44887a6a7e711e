#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mclt/analysis.hpp"

namespace mclt::cli {

// Formats a double with 17 significant digits, enough to round-trip
// bit-exactly; every emitted float goes through this one function.
std::string format_double(double v);

// Per-n statistics table. Columns: n, s2_hat, s2_stderr, d_hat, dkw_eps,
// v2_p{P}_hat and v2_p{P}_stderr per requested p, v2_sup_hat, hall_bound,
// bolthausen_bound, corollary_bound, theorem3_bound.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

// JSON summary mirroring the CSV values plus the power-law fits.
std::string report_summary_json(const ExperimentReport& report);

// Writes <base>.csv and <base>.json (format csv) or just <base>.json with
// embedded rows (format json). Returns the written paths.
std::vector<std::string> write_report_files(const ExperimentReport& report);

// Rebuilds the fit-ready series (d_hat and every v2_p{P} column) from a
// statistics CSV produced by write_report_csv.
std::vector<RateSeries> read_rate_series_csv(std::istream& in);

// Acceptance-style thresholds for `simulate --check`: baseline slope for the
// Rademacher kernel, the |V^2-1|^p slopes and the positive lower-bound
// margin for the modified kernel. Returns human-readable failure lines.
std::vector<std::string> check_report(const ExperimentReport& report);

}  // namespace mclt::cli
