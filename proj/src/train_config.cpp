#include "gazekit/train/config.hpp"

#include <json.hpp>

#include "gazekit/errors.hpp"

namespace gazekit {

std::string regime_to_string(Regime r) {
  switch (r) {
    case Regime::Phase1: return "phase1";
    case Regime::Phase2: return "phase2";
    case Regime::End2EndStage2: return "end2end_stage2";
    case Regime::Text: return "text";
  }
  throw ConfigError("regime_to_string: bad enum value");
}

Regime regime_from_string(const std::string& s) {
  if (s == "phase1") return Regime::Phase1;
  if (s == "phase2") return Regime::Phase2;
  if (s == "end2end_stage2") return Regime::End2EndStage2;
  if (s == "text") return Regime::Text;
  throw ConfigError("unknown regime '" + s +
                    "' (expected phase1 | phase2 | end2end_stage2 | text)");
}

int regime_condition_channels(Regime r) {
  switch (r) {
    case Regime::Phase1:
    case Regime::Text: return 1;
    case Regime::Phase2:
    case Regime::End2EndStage2: return 3;
  }
  throw ConfigError("regime_condition_channels: bad enum value");
}

void validate_config(const TrainConfig& cfg) {
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
    throw ConfigError("config: test_fraction must lie in (0, 1)");
  if (cfg.batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (cfg.epochs < 0) throw ConfigError("config: epochs must be >= 0");
  if (cfg.learning_rate < 0 || cfg.decay_rate < 0 || cfg.momentum < 0 || cfg.epsilon < 0)
    throw ConfigError("config: rates must be nonnegative");
  if (cfg.lambda_l1 < 0) throw ConfigError("config: lambda_l1 must be nonnegative");
  if (cfg.depth < 1) throw ConfigError("config: depth must be >= 1");
  if (cfg.base_filters < 1 || cfg.d_base_filters < 1)
    throw ConfigError("config: filter counts must be >= 1");
  if (cfg.d_layers < 1) throw ConfigError("config: d_layers must be >= 1");
  if (cfg.dropout_rate < 0 || cfg.dropout_rate >= 1)
    throw ConfigError("config: dropout_rate must lie in [0, 1)");
}

std::string config_to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["learning_rate"] = cfg.learning_rate;
  j["decay_rate"] = cfg.decay_rate;
  j["momentum"] = cfg.momentum;
  j["epsilon"] = cfg.epsilon;
  j["batch_size"] = cfg.batch_size;
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["test_fraction"] = cfg.test_fraction;
  j["lambda_l1"] = cfg.lambda_l1;
  j["regime"] = regime_to_string(cfg.regime);
  j["depth"] = cfg.depth;
  j["base_filters"] = cfg.base_filters;
  j["d_layers"] = cfg.d_layers;
  j["d_base_filters"] = cfg.d_base_filters;
  j["dropout_rate"] = cfg.dropout_rate;
  return j.dump(2) + "\n";
}

TrainConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  TrainConfig cfg;
  try {
    // Every field is optional; absent fields keep their defaults.
    if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("decay_rate")) cfg.decay_rate = j["decay_rate"].get<double>();
    if (j.contains("momentum")) cfg.momentum = j["momentum"].get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("test_fraction")) cfg.test_fraction = j["test_fraction"].get<double>();
    if (j.contains("lambda_l1")) cfg.lambda_l1 = j["lambda_l1"].get<double>();
    if (j.contains("regime")) cfg.regime = regime_from_string(j["regime"].get<std::string>());
    if (j.contains("depth")) cfg.depth = j["depth"].get<int>();
    if (j.contains("base_filters")) cfg.base_filters = j["base_filters"].get<int>();
    if (j.contains("d_layers")) cfg.d_layers = j["d_layers"].get<int>();
    if (j.contains("d_base_filters")) cfg.d_base_filters = j["d_base_filters"].get<int>();
    if (j.contains("dropout_rate")) cfg.dropout_rate = j["dropout_rate"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: malformed field: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

}  // namespace gazekit
