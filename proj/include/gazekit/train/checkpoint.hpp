#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gazekit/nn/discriminator.hpp"
#include "gazekit/nn/generator.hpp"
#include "gazekit/nn/rmsprop.hpp"
#include "gazekit/train/config.hpp"

namespace gazekit {

// On disk: 8-byte magic, u32 little-endian header length, JSON header
// {format_version, regime, epoch, generator_spec, discriminator_spec, config,
// rng_state, arrays: [{name, count}]}, then the arrays' float32 data in
// listed order, little-endian. Save -> load -> save is byte-identical.
struct CheckpointData {
  int format_version = 1;
  std::string regime;
  int epoch = 0;
  nn::GeneratorSpec gen_spec;
  nn::DiscriminatorSpec disc_spec;
  TrainConfig config;
  std::string dropout_rng_state;
  std::string shuffle_rng_state;
  std::vector<std::pair<std::string, std::vector<float>>> arrays;
};

void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

// Gathers model parameters, batch-norm buffers, and optimizer accumulators.
CheckpointData snapshot_checkpoint(nn::UnetGenerator<float>& gen,
                                   nn::PatchDiscriminator<float>& disc,
                                   nn::RmsProp<float>& g_opt, nn::RmsProp<float>& d_opt,
                                   const TrainConfig& config, int epoch,
                                   const std::string& shuffle_rng_state);

// Writes the stored arrays back into freshly built models/optimizers; throws
// DataError on name or size mismatches. Null pointers skip that component's
// arrays (e.g. inference restores only the generator).
void restore_checkpoint(const CheckpointData& data, nn::UnetGenerator<float>* gen,
                        nn::PatchDiscriminator<float>* disc, nn::RmsProp<float>* g_opt,
                        nn::RmsProp<float>* d_opt);

}  // namespace gazekit
