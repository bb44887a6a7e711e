#include "mclt/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mclt/errors.hpp"

namespace mclt {

using nlohmann::json;

void ExperimentConfig::validate() const {
  try {
    kernel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  if (n_grid.empty()) throw ConfigError("n_grid: must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("n_grid: entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ConfigError("n_grid: must be strictly increasing");
    }
  }
  if (m < 100) throw ConfigError("m: must be >= 100");
  if (m_s2 < 100) throw ConfigError("m_s2: must be >= 100");
  if (p_values.empty()) throw ConfigError("p_values: must be nonempty");
  for (double p : p_values) {
    if (!(p >= 1.0)) throw ConfigError("p_values: entries must be >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence: must lie in (0, 1)");
  }
  if (output_path.empty()) throw ConfigError("output: path must be nonempty");
}

namespace {

std::string variant_name(KernelVariant v) {
  return v == KernelVariant::Rademacher ? "rademacher" : "paper_example";
}

KernelVariant variant_from_name(const std::string& name) {
  if (name == "rademacher") return KernelVariant::Rademacher;
  if (name == "paper_example") return KernelVariant::PaperExample;
  throw ConfigError("kernel.variant: unknown variant '" + name + "'");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig config;
  try {
    const json& k = j.at("kernel");
    config.kernel.variant = variant_from_name(k.at("variant").get<std::string>());
    if (config.kernel.variant == KernelVariant::PaperExample) {
      config.kernel.alpha = k.at("alpha").get<double>();
      config.kernel.beta = k.value("beta", 0.25);
    }
    config.n_grid = j.at("n_grid").get<std::vector<long>>();
    config.m = j.at("m").get<long>();
    config.m_s2 = j.value("m_s2", config.m);
    config.p_values = j.value("p_values", std::vector<double>{1.0});
    config.seed = j.at("seed").get<std::uint64_t>();
    config.confidence = j.value("confidence", 0.01);
    const json& out = j.at("output");
    config.output_path = out.at("path").get<std::string>();
    const std::string format = out.value("format", "csv");
    if (format == "csv") {
      config.output_format = OutputFormat::Csv;
    } else if (format == "json") {
      config.output_format = OutputFormat::Json;
    } else {
      throw ConfigError("output.format: expected 'csv' or 'json', got '" +
                        format + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  config.validate();
  return config;
}

std::string config_to_json_text(const ExperimentConfig& config) {
  json k;
  k["variant"] = variant_name(config.kernel.variant);
  if (config.kernel.variant == KernelVariant::PaperExample) {
    k["alpha"] = config.kernel.alpha;
    k["beta"] = config.kernel.beta;
  }
  json j;
  j["kernel"] = k;
  j["n_grid"] = config.n_grid;
  j["m"] = config.m;
  j["m_s2"] = config.m_s2;
  j["p_values"] = config.p_values;
  j["seed"] = config.seed;
  j["confidence"] = config.confidence;
  j["output"] = {
      {"path", config.output_path},
      {"format", config.output_format == OutputFormat::Csv ? "csv" : "json"},
  };
  return j.dump(2);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

}  // namespace mclt
