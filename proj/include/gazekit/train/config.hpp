#pragma once

#include <cstdint>
#include <string>

namespace gazekit {

enum class Regime { Phase1, Phase2, End2EndStage2, Text };

std::string regime_to_string(Regime r);
Regime regime_from_string(const std::string& s);  // ConfigError on unknown names

// Generator input channel count for a regime: heatmap-conditioned regimes take
// one channel, image-conditioned regimes three.
int regime_condition_channels(Regime r);

struct TrainConfig {
  double learning_rate = 0.001;
  double decay_rate = 0.9;  // RMSProp square-average smoothing
  double momentum = 0.0;
  double epsilon = 1e-6;
  int batch_size = 2;
  int epochs = 1;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  double lambda_l1 = 0.01;
  Regime regime = Regime::Phase1;

  // Architecture knobs (desk-scale runs shrink these).
  int depth = 8;
  int base_filters = 64;
  int d_layers = 3;
  int d_base_filters = 64;
  double dropout_rate = 0.5;
};

// Throws ConfigError on out-of-range fields.
void validate_config(const TrainConfig& cfg);

std::string config_to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const std::string& text);

}  // namespace gazekit
