#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gazekit/dataset.hpp"
#include "gazekit/heatmap.hpp"
#include "gazekit/image.hpp"
#include "gazekit/nn/discriminator.hpp"
#include "gazekit/nn/generator.hpp"
#include "gazekit/nn/loss.hpp"
#include "gazekit/nn/rmsprop.hpp"
#include "gazekit/train/checkpoint.hpp"
#include "gazekit/train/config.hpp"

namespace gazekit {

// ---------------------------------------------------------------------------
// Image <-> tensor plumbing. Images carry [0,255] intensities; the models work
// in the tanh range, mapped linearly by x/127.5 - 1.
nn::Tensor<float> image_to_tensor(const ImageF& img);
ImageF tensor_to_image(const nn::Tensor<float>& t, int sample = 0);
nn::Tensor<float> stack_batch(const std::vector<const nn::Tensor<float>*>& items);
void to_unit_range(nn::Tensor<float>& t);
void to_intensity_range(nn::Tensor<float>& t);

// ---------------------------------------------------------------------------
struct StepRecord {
  int step = 0;
  double d_loss = 0, g_adv = 0, g_l1 = 0, seconds = 0;
};

struct TrainLog {
  std::vector<StepRecord> records;
  std::string to_csv() const;  // header: step,d_loss,g_adv,g_l1,seconds
};

// Mutable training state: models, optimizers, epoch shuffling.
struct TrainState {
  TrainConfig config;
  nn::UnetGenerator<float> gen;
  nn::PatchDiscriminator<float> disc;
  nn::RmsProp<float> g_opt;
  nn::RmsProp<float> d_opt;
  std::mt19937_64 shuffle_rng;
  int next_step = 1;

  explicit TrainState(const TrainConfig& cfg);
};

// One alternating update: the discriminator trains on (condition, target) vs
// (condition, fake) with the generator frozen, then the generator trains
// against the updated discriminator (discriminator weights held constant).
// Inputs are in the [-1,1] activation range. Throws TrainingError when a loss
// goes non-finite.
StepRecord training_step(TrainState& st, const nn::Tensor<float>& cond,
                         const nn::Tensor<float>& target);

// Stage-2 input assembly: red' = min(255, heat + seg_red); green' = 255
// exactly where the seg pixel is (255,255,255), else 0; blue' = seg_blue.
// The heatmap is real-valued; the seg enters raw (no palette snapping).
ImageF concat_end2end(const Heatmap& heat, const ImageF& seg);

// ---------------------------------------------------------------------------
// Dataset-level training. `pairs` loading resolves each regime's (condition,
// target) directories; end2end_stage2 builds conditions through the frozen
// stage-1 generator.
struct PairSet {
  std::vector<std::string> ids;
  std::vector<nn::Tensor<float>> cond;    // normalized, 1 sample each
  std::vector<nn::Tensor<float>> target;  // normalized
};

PairSet load_pairs(const std::string& dataset_dir, const Manifest& manifest, Regime regime,
                   const std::vector<std::string>& ids,
                   nn::UnetGenerator<float>* stage1 = nullptr);

struct TrainResult {
  TrainLog log;
  std::vector<std::string> train_ids, test_ids;
  std::string final_checkpoint;  // path
};

// Runs epochs x ceil(N_train / batch_size) steps, a rolling per-epoch
// checkpoint plus checkpoint_final.bin, and log.csv under out_dir.
TrainResult train(const std::string& dataset_dir, const TrainConfig& cfg,
                  const std::string& out_dir, nn::UnetGenerator<float>* stage1 = nullptr);

struct End2EndResult {
  TrainResult stage1;
  TrainResult stage2;
};

// Stage 1 trains as phase1; its frozen generator then produces stage-2 inputs
// for a fresh re-initialized model trained on (concat -> detailed) pairs.
End2EndResult train_end2end(const std::string& dataset_dir, const TrainConfig& cfg,
                            const std::string& out_dir);

// ---------------------------------------------------------------------------
// Inference: dropout off, batch-norm running stats; deterministic.
ImageF infer_image(nn::UnetGenerator<float>& gen, const ImageF& condition);

std::unique_ptr<nn::UnetGenerator<float>> generator_from_checkpoint(const CheckpointData& data);

}  // namespace gazekit
