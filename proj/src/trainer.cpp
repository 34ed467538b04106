#include "gazekit/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gazekit/errors.hpp"
#include "gazekit/fixation.hpp"
#include "gazekit/nn/init.hpp"
#include "gazekit/saliency.hpp"

namespace fs = std::filesystem;

namespace gazekit {

// ---------------------------------------------------------------------------
nn::Tensor<float> image_to_tensor(const ImageF& img) {
  nn::Tensor<float> t(1, img.channel_count(), img.height, img.width);
  for (int ci = 0; ci < img.channel_count(); ++ci) {
    float* dst = t.plane(0, ci);
    const auto& plane = img.channels[ci];
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) *dst++ = plane(y, x);
  }
  return t;
}

ImageF tensor_to_image(const nn::Tensor<float>& t, int sample) {
  ImageF img(t.w, t.h, t.c);
  for (int ci = 0; ci < t.c; ++ci) {
    const float* src = t.plane(sample, ci);
    auto& plane = img.channels[ci];
    for (int y = 0; y < t.h; ++y)
      for (int x = 0; x < t.w; ++x) plane(y, x) = *src++;
  }
  return img;
}

nn::Tensor<float> stack_batch(const std::vector<const nn::Tensor<float>*>& items) {
  if (items.empty()) throw ContractError("stack_batch: empty batch");
  const auto& first = *items[0];
  nn::Tensor<float> out(static_cast<int>(items.size()), first.c, first.h, first.w);
  const Eigen::Index per = first.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i]->c != first.c || items[i]->h != first.h || items[i]->w != first.w)
      throw ContractError("stack_batch: item shape mismatch");
    out.data.segment(static_cast<Eigen::Index>(i) * per, per) = items[i]->data;
  }
  return out;
}

void to_unit_range(nn::Tensor<float>& t) { t.data = t.data / 127.5f - 1.f; }
void to_intensity_range(nn::Tensor<float>& t) { t.data = (t.data + 1.f) * 127.5f; }

// ---------------------------------------------------------------------------
std::string TrainLog::to_csv() const {
  std::string out = "step,d_loss,g_adv,g_l1,seconds\n";
  char line[160];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g,%.6f\n", r.step, r.d_loss, r.g_adv,
                  r.g_l1, r.seconds);
    out += line;
  }
  return out;
}

TrainState::TrainState(const TrainConfig& cfg)
    : config(cfg),
      gen(nn::GeneratorSpec{regime_condition_channels(cfg.regime), 3, cfg.depth,
                            cfg.base_filters, static_cast<float>(cfg.dropout_rate)}),
      disc(nn::DiscriminatorSpec{regime_condition_channels(cfg.regime) + 3, cfg.d_layers,
                                 cfg.d_base_filters}),
      g_opt(static_cast<float>(cfg.learning_rate), static_cast<float>(cfg.decay_rate),
            static_cast<float>(cfg.momentum), static_cast<float>(cfg.epsilon)),
      d_opt(static_cast<float>(cfg.learning_rate), static_cast<float>(cfg.decay_rate),
            static_cast<float>(cfg.momentum), static_cast<float>(cfg.epsilon)),
      shuffle_rng(mix_seed(cfg.seed, 0xD)) {
  nn::init_weights(gen.params(), mix_seed(cfg.seed, 0xA));
  nn::init_weights(disc.params(), mix_seed(cfg.seed, 0xB));
  gen.dropout_rng().seed(mix_seed(cfg.seed, 0xC));
}

StepRecord training_step(TrainState& st, const nn::Tensor<float>& cond,
                         const nn::Tensor<float>& target) {
  const auto t0 = std::chrono::steady_clock::now();
  const nn::LossWeights weights{st.config.lambda_l1};

  // Generator forward once; the same fake serves the discriminator update
  // (detached by construction) and the generator update.
  nn::zero_grads(st.gen.params());
  const nn::Tensor<float> fake = st.gen.forward(cond, true);

  // Discriminator update, generator frozen.
  nn::zero_grads(st.disc.params());
  const nn::Tensor<float> d_real = st.disc.forward(nn::concat_channels(cond, target), true);
  st.disc.backward(nn::d_loss_real_grad(d_real));
  const nn::Tensor<float> d_fake = st.disc.forward(nn::concat_channels(cond, fake), true);
  st.disc.backward(nn::d_loss_fake_grad(d_fake));
  const double loss_d = nn::d_loss(d_real, d_fake);
  st.d_opt.step(st.disc.params());

  // Generator update against the updated discriminator; the adversarial
  // gradient flows through the discriminator without updating it (its grads
  // are cleared before its next update).
  nn::zero_grads(st.disc.params());
  const nn::Tensor<float> d_fake2 = st.disc.forward(nn::concat_channels(cond, fake), true);
  const double loss_g_adv = nn::g_adv_loss(d_fake2);
  const double loss_g_l1 = nn::l1_loss(fake, target);
  nn::Tensor<float> g_pair = st.disc.backward(nn::g_adv_loss_grad(d_fake2));
  nn::Tensor<float> g_cond, g_fake;
  nn::split_channels(g_pair, cond.c, g_cond, g_fake);
  g_fake.data += static_cast<float>(weights.lambda_l1) * nn::l1_loss_grad(fake, target).data;
  st.gen.backward(g_fake);
  st.g_opt.step(st.gen.params());

  StepRecord rec;
  rec.step = st.next_step++;
  rec.d_loss = loss_d;
  rec.g_adv = loss_g_adv;
  rec.g_l1 = loss_g_l1;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!std::isfinite(rec.d_loss) || !std::isfinite(rec.g_adv) || !std::isfinite(rec.g_l1))
    throw TrainingError("training aborted at step " + std::to_string(rec.step) +
                        ": non-finite loss (d=" + std::to_string(rec.d_loss) +
                        ", g_adv=" + std::to_string(rec.g_adv) +
                        ", g_l1=" + std::to_string(rec.g_l1) + ")");
  return rec;
}

// ---------------------------------------------------------------------------
ImageF concat_end2end(const Heatmap& heat, const ImageF& seg) {
  if (seg.channel_count() != 3)
    throw ContractError("concat_end2end: seg must have 3 channels, has " +
                        std::to_string(seg.channel_count()));
  if (heat.width() != seg.width || heat.height() != seg.height)
    throw ContractError("concat_end2end: heatmap " + std::to_string(heat.width()) + "x" +
                        std::to_string(heat.height()) + " vs seg " + std::to_string(seg.width) +
                        "x" + std::to_string(seg.height));
  ImageF out(seg.width, seg.height, 3);
  const auto& r = seg.channels[0];
  const auto& g = seg.channels[1];
  const auto& b = seg.channels[2];
  out.channels[0] = (heat.intensities + r).min(255.f);
  out.channels[1] = ((r == 255.f) && (g == 255.f) && (b == 255.f)).select(255.f, Plane<float>::Zero(seg.height, seg.width));
  out.channels[2] = b;
  return out;
}

// ---------------------------------------------------------------------------
namespace {

// Regenerates the real-valued heatmap that heat/<id>.png presents, per the
// provider recorded in the manifest.
Heatmap real_heatmap_for(const std::string& dataset_dir, const Manifest& m,
                         const std::string& id) {
  const double sigma = m.has_render_params() ? m.render_sigma_px : 2.0;
  if (m.saliency_provider == "fixations" || (!m.has_render_params() && m.kind == "text")) {
    const TrialRecord trial = load_trial(dataset_dir + "/fixations/" + id + ".json");
    return render_heatmap(trial, m.page_w, m.page_h, sigma);
  }
  if (m.saliency_provider == "heuristic") {
    const ImageF detail = load_item_image(dataset_dir, "detail", id);
    return heuristic_saliency(detail);
  }
  // precomputed or unknown: the stored PNG is the source of truth
  return load_precomputed_saliency(dataset_dir + "/heat/" + id + ".png", m.page_w, m.page_h);
}

nn::Tensor<float> normalized_tensor(const ImageF& img) {
  nn::Tensor<float> t = image_to_tensor(img);
  to_unit_range(t);
  return t;
}

}  // namespace

PairSet load_pairs(const std::string& dataset_dir, const Manifest& manifest, Regime regime,
                   const std::vector<std::string>& ids, nn::UnetGenerator<float>* stage1) {
  PairSet out;
  out.ids = ids;
  for (const auto& id : ids) {
    switch (regime) {
      case Regime::Phase1:
        out.cond.push_back(normalized_tensor(load_item_image(dataset_dir, "heat", id)));
        out.target.push_back(normalized_tensor(load_item_image(dataset_dir, "seg", id)));
        break;
      case Regime::Phase2:
        out.cond.push_back(normalized_tensor(load_item_image(dataset_dir, "seg", id)));
        out.target.push_back(normalized_tensor(load_item_image(dataset_dir, "detail", id)));
        break;
      case Regime::Text:
        out.cond.push_back(normalized_tensor(load_item_image(dataset_dir, "heat", id)));
        out.target.push_back(normalized_tensor(load_item_image(dataset_dir, "text", id)));
        break;
      case Regime::End2EndStage2: {
        if (!stage1)
          throw ConfigError("end2end_stage2 pairs need the frozen stage-1 generator");
        const ImageF heat_png = load_item_image(dataset_dir, "heat", id);
        const ImageF gen_seg = infer_image(*stage1, heat_png);
        const Heatmap heat = real_heatmap_for(dataset_dir, manifest, id);
        out.cond.push_back(normalized_tensor(concat_end2end(heat, gen_seg)));
        out.target.push_back(normalized_tensor(load_item_image(dataset_dir, "detail", id)));
        break;
      }
    }
  }
  return out;
}

TrainResult train(const std::string& dataset_dir, const TrainConfig& cfg,
                  const std::string& out_dir, nn::UnetGenerator<float>* stage1) {
  validate_config(cfg);
  const Manifest manifest = load_manifest(dataset_dir);

  const bool wants_text = cfg.regime == Regime::Text;
  if (wants_text != (manifest.kind == "text"))
    throw ConfigError("regime '" + regime_to_string(cfg.regime) +
                      "' does not match dataset kind '" + manifest.kind + "'");
  if (cfg.regime == Regime::End2EndStage2 && !stage1)
    throw ConfigError("end2end_stage2 requires a stage-1 generator");
  const int stride_total = 1 << cfg.depth;
  if (manifest.page_w % stride_total != 0 || manifest.page_h % stride_total != 0)
    throw ConfigError("page size " + std::to_string(manifest.page_w) + "x" +
                      std::to_string(manifest.page_h) + " is not divisible by 2^depth = " +
                      std::to_string(stride_total));

  fs::create_directories(out_dir);

  TrainResult result;
  auto split = split_dataset(manifest.item_ids, cfg.test_fraction, cfg.seed);
  result.train_ids = std::move(split.first);
  result.test_ids = std::move(split.second);
  if (result.train_ids.empty()) throw ConfigError("train: empty train split");

  const PairSet pairs = load_pairs(dataset_dir, manifest, cfg.regime, result.train_ids, stage1);
  TrainState st(cfg);

  const auto save_epoch = [&](int epoch, const std::string& name) {
    std::ostringstream shuffle_state;
    shuffle_state << st.shuffle_rng;
    save_checkpoint(out_dir + "/" + name,
                    snapshot_checkpoint(st.gen, st.disc, st.g_opt, st.d_opt, cfg, epoch,
                                        shuffle_state.str()));
  };

  const int n = static_cast<int>(pairs.cond.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), st.shuffle_rng);
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, n - start);
      std::vector<const nn::Tensor<float>*> conds, targets;
      for (int k = 0; k < count; ++k) {
        conds.push_back(&pairs.cond[order[start + k]]);
        targets.push_back(&pairs.target[order[start + k]]);
      }
      result.log.records.push_back(
          training_step(st, stack_batch(conds), stack_batch(targets)));
    }
    save_epoch(epoch, "checkpoint_last.bin");
  }
  save_epoch(cfg.epochs, "checkpoint_final.bin");
  result.final_checkpoint = out_dir + "/checkpoint_final.bin";

  std::ofstream csv(out_dir + "/log.csv", std::ios::binary);
  if (!csv) throw IoError("train: cannot write " + out_dir + "/log.csv");
  csv << result.log.to_csv();
  return result;
}

End2EndResult train_end2end(const std::string& dataset_dir, const TrainConfig& cfg,
                            const std::string& out_dir) {
  End2EndResult result;

  TrainConfig cfg1 = cfg;
  cfg1.regime = Regime::Phase1;
  result.stage1 = train(dataset_dir, cfg1, out_dir + "/stage1");

  auto stage1_gen = generator_from_checkpoint(load_checkpoint(result.stage1.final_checkpoint));

  TrainConfig cfg2 = cfg;
  cfg2.regime = Regime::End2EndStage2;
  result.stage2 = train(dataset_dir, cfg2, out_dir + "/stage2", stage1_gen.get());
  return result;
}

// ---------------------------------------------------------------------------
ImageF infer_image(nn::UnetGenerator<float>& gen, const ImageF& condition) {
  nn::Tensor<float> cond = image_to_tensor(condition);
  to_unit_range(cond);
  nn::Tensor<float> out = gen.forward(cond, false);
  to_intensity_range(out);
  return tensor_to_image(out, 0);
}

std::unique_ptr<nn::UnetGenerator<float>> generator_from_checkpoint(const CheckpointData& data) {
  auto gen = std::make_unique<nn::UnetGenerator<float>>(data.gen_spec);
  restore_checkpoint(data, gen.get(), nullptr, nullptr, nullptr);
  return gen;
}

}  // namespace gazekit
