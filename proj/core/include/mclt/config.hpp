#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mclt/kernels.hpp"

namespace mclt {

enum class OutputFormat { Csv, Json };

// Full description of one simulation sweep. All randomness flows from
// `seed`; two runs with equal configs produce identical output bytes.
struct ExperimentConfig {
  KernelSpec kernel;
  std::vector<long> n_grid;
  long m = 100'000;       // paths per grid point, main pass
  long m_s2 = 100'000;    // paths for the independent s^2 pass
  std::vector<double> p_values{1.0};
  std::uint64_t seed = 0;
  double confidence = 0.01;  // DKW delta for the Kolmogorov radius
  std::string output_path = "experiment";
  OutputFormat output_format = OutputFormat::Csv;

  // Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// JSON round trip; parse(serialize(c)) == c.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace mclt
