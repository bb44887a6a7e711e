#include "report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mclt/errors.hpp"

namespace mclt::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "n,s2_hat,s2_stderr,d_hat,dkw_eps";
  for (double p : report.config.p_values) {
    const std::string label = v2_series_label(p);
    out << ',' << label << "_hat," << label << "_stderr";
  }
  out << ",v2_sup_hat,hall_bound,bolthausen_bound,corollary_bound,theorem3_bound\n";
  for (const GridPointStats& row : report.rows) {
    out << row.n << ',' << format_double(row.s2.value) << ','
        << format_double(row.s2.std_error) << ','
        << format_double(row.kolmogorov.d_hat) << ','
        << format_double(row.kolmogorov.dkw_epsilon);
    for (const Estimate& v2 : row.v2_moments) {
      out << ',' << format_double(v2.value) << ',' << format_double(v2.std_error);
    }
    out << ',' << format_double(row.v2_sup) << ',' << format_double(row.hall)
        << ',' << format_double(row.bolthausen) << ','
        << format_double(row.corollary) << ',' << format_double(row.theorem3)
        << '\n';
  }
}

namespace {

json row_to_json(const ExperimentReport& report, const GridPointStats& row) {
  json j;
  j["n"] = row.n;
  j["s2_hat"] = row.s2.value;
  j["s2_stderr"] = row.s2.std_error;
  j["d_hat"] = row.kolmogorov.d_hat;
  j["dkw_eps"] = row.kolmogorov.dkw_epsilon;
  for (std::size_t pi = 0; pi < report.config.p_values.size(); ++pi) {
    const std::string label = v2_series_label(report.config.p_values[pi]);
    j[label + "_hat"] = row.v2_moments[pi].value;
    j[label + "_stderr"] = row.v2_moments[pi].std_error;
  }
  j["v2_sup_hat"] = row.v2_sup;
  j["hall_bound"] = row.hall;
  j["bolthausen_bound"] = row.bolthausen;
  j["corollary_bound"] = row.corollary;
  j["theorem3_bound"] = row.theorem3;
  return j;
}

}  // namespace

std::string report_summary_json(const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(config_to_json_text(report.config));
  j["bound_constant"] = "xC";  // bound columns suppress the theorem constants
  json rows = json::array();
  for (const GridPointStats& row : report.rows) {
    rows.push_back(row_to_json(report, row));
  }
  j["rows"] = rows;
  json fits;
  for (const auto& [label, fit] : report.fits) {
    fits[label] = {{"slope", fit.slope},
                   {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared}};
  }
  j["fits"] = fits;
  return j.dump(2);
}

std::vector<std::string> write_report_files(const ExperimentReport& report) {
  std::vector<std::string> written;
  const std::string& base = report.config.output_path;
  if (report.config.output_format == OutputFormat::Csv) {
    const std::string csv_path = base + ".csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    write_report_csv(csv, report);
    written.push_back(csv_path);
  }
  const std::string json_path = base + ".json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << report_summary_json(report) << '\n';
  written.push_back(json_path);
  return written;
}

std::vector<RateSeries> read_rate_series_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw ConfigError("rates: empty CSV input");
  }
  std::vector<std::string> columns;
  {
    std::istringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) columns.push_back(col);
  }
  auto find_column = [&](const std::string& name) -> long {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == name) return static_cast<long>(c);
    }
    return -1;
  };
  const long n_col = find_column("n");
  if (n_col < 0) throw ConfigError("rates: CSV is missing the n column");

  struct SeriesColumn {
    std::string label;
    long value_col;
    long stderr_col;
  };
  std::vector<SeriesColumn> wanted;
  if (find_column("d_hat") >= 0) {
    wanted.push_back({"d_hat", find_column("d_hat"), find_column("dkw_eps")});
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const std::string& name = columns[c];
    if (name.rfind("v2_p", 0) == 0 && name.size() > 8 &&
        name.compare(name.size() - 4, 4, "_hat") == 0) {
      const std::string label = name.substr(0, name.size() - 4);
      wanted.push_back({label, static_cast<long>(c), find_column(label + "_stderr")});
    }
  }

  std::vector<RateSeries> series;
  for (const SeriesColumn& sc : wanted) series.push_back(RateSeries{sc.label, {}});

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != columns.size()) {
      throw ConfigError("rates: malformed CSV row '" + line + "'");
    }
    const long n = std::stol(fields[n_col]);
    for (std::size_t si = 0; si < wanted.size(); ++si) {
      const double value = std::stod(fields[wanted[si].value_col]);
      const double se = wanted[si].stderr_col >= 0
                            ? std::stod(fields[wanted[si].stderr_col])
                            : 0.0;
      series[si].points.push_back(RatePoint{n, value, se});
    }
  }
  return series;
}

std::vector<std::string> check_report(const ExperimentReport& report) {
  std::vector<std::string> failures;
  auto fit_for = [&](const std::string& label) -> const PowerLawFit* {
    for (const auto& [name, fit] : report.fits) {
      if (name == label) return &fit;
    }
    return nullptr;
  };

  if (report.config.kernel.variant == KernelVariant::Rademacher) {
    const PowerLawFit* d_fit = fit_for("d_hat");
    if (d_fit == nullptr) {
      failures.push_back("d_hat series is not fittable");
      return failures;
    }
    if (std::abs(d_fit->slope + 0.5) > 0.1) {
      failures.push_back("d_hat slope " + format_double(d_fit->slope) +
                         " outside -0.5 +- 0.1");
    }
    if (d_fit->r_squared < 0.95) {
      failures.push_back("d_hat fit r^2 " + format_double(d_fit->r_squared) +
                         " below 0.95");
    }
    return failures;
  }

  const double alpha = report.config.kernel.alpha;
  for (std::size_t pi = 0; pi < report.config.p_values.size(); ++pi) {
    const double p = report.config.p_values[pi];
    const std::string label = v2_series_label(p);
    const PowerLawFit* fit = fit_for(label);
    if (fit == nullptr) {
      failures.push_back(label + " series is not fittable");
      continue;
    }
    const double expected = (alpha - 1.0) * (2.0 * p + 1.0) / 2.0;
    const double tolerance = p == 1.0 ? 0.1 : 0.12;
    if (std::abs(fit->slope - expected) > tolerance) {
      failures.push_back(label + " slope " + format_double(fit->slope) +
                         " outside " + format_double(expected) + " +- " +
                         format_double(tolerance));
    }
  }
  // lower-bound margin: (d_hat - dkw_eps) * n^{(1-alpha)/2} must stay positive
  double min_margin = 0.0;
  bool first = true;
  for (const GridPointStats& row : report.rows) {
    const double margin = (row.kolmogorov.d_hat - row.kolmogorov.dkw_epsilon) *
                          std::pow(static_cast<double>(row.n), (1.0 - alpha) / 2.0);
    if (first || margin < min_margin) min_margin = margin;
    first = false;
  }
  if (!(min_margin > 0.0)) {
    failures.push_back("kolmogorov lower-bound margin " +
                       format_double(min_margin) + " not positive");
  }
  return failures;
}

}  // namespace mclt::cli
