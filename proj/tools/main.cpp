// gazekit command-line front end: corpus generation, heatmap rendering,
// training, inference and evaluation as reproducible, config-driven runs.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>

#include "gazekit/dataset.hpp"
#include "gazekit/errors.hpp"
#include "gazekit/eval/report.hpp"
#include "gazekit/eval/ssim.hpp"
#include "gazekit/eval/text_metrics.hpp"
#include "gazekit/heatmap.hpp"
#include "gazekit/png_io.hpp"
#include "gazekit/saliency.hpp"
#include "gazekit/train/checkpoint.hpp"
#include "gazekit/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gazekit;

namespace {

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw IoError("short write: " + tmp);
  }
  fs::rename(tmp, path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every command drops its resolved settings (defaults included) beside its
// outputs so a run can be reproduced from the artifacts alone.
void echo_config(const std::string& out_dir, const std::string& command, const json& resolved) {
  fs::create_directories(out_dir);
  json j = resolved;
  j["command"] = command;
  write_text_atomic(out_dir + "/resolved_" + command + ".json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
struct GenCorpusArgs {
  std::string kind, out;
  int n = 0;
  std::uint64_t seed = 0;
  int width = 256, height = 256;
  int rows = 3, words_per_row = 5;
};

int cmd_gen_corpus(const GenCorpusArgs& a) {
  const GlyphAtlas& atlas = builtin_atlas();
  Manifest m;
  if (a.kind == "text")
    m = gen_text_corpus(a.out, a.n, a.seed, atlas, a.width, a.height, a.rows, a.words_per_row);
  else
    m = gen_newspaper_corpus(a.out, a.n, a.seed, atlas, a.width, a.height);
  echo_config(a.out, "gen-corpus",
              {{"kind", a.kind},
               {"n", a.n},
               {"seed", a.seed},
               {"out", a.out},
               {"width", a.width},
               {"height", a.height},
               {"rows", a.rows},
               {"words_per_row", a.words_per_row}});
  std::cout << "wrote " << m.item_ids.size() << " " << a.kind << " items to " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
struct RenderGazeArgs {
  std::string dataset;
  std::string provider = "auto";  // fixations | heuristic | precomputed
  std::string saliency_dir;
  double sigma = 2.0;
};

int cmd_render_gaze(const RenderGazeArgs& a) {
  Manifest m = load_manifest(a.dataset);
  std::string provider = a.provider;
  if (provider == "auto") provider = m.kind == "text" ? "fixations" : "heuristic";
  const std::string saliency_dir =
      a.saliency_dir.empty() ? a.dataset + "/saliency" : a.saliency_dir;
  const std::string page_dir = m.kind == "text" ? "text" : "detail";

  std::unique_ptr<SaliencySource> source;
  if (provider == "heuristic") source = make_heuristic_source();
  if (provider == "precomputed")
    source = make_precomputed_source(saliency_dir, m.page_w, m.page_h);

  fs::create_directories(a.dataset + "/heat");
  int failures = 0;
  for (const std::string& id : m.item_ids) {
    try {
      Heatmap heat;
      if (provider == "fixations") {
        TrialRecord trial = load_trial(a.dataset + "/fixations/" + id + ".json");
        heat = render_heatmap(trial, m.page_w, m.page_h, a.sigma);
      } else {
        ImageF page = load_item_image(a.dataset, page_dir, id);
        heat = source->saliency_for(page, id);
      }
      write_png(a.dataset + "/heat/" + id + ".png", heatmap_to_image(heat));
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "item " << id << ": " << e.what() << "\n";
    }
  }

  m.saliency_provider = provider;
  m.render_sigma_px = a.sigma;
  save_manifest(a.dataset, m);
  echo_config(a.dataset, "render-gaze",
              {{"dataset", a.dataset},
               {"provider", provider},
               {"sigma", a.sigma},
               {"saliency_dir", saliency_dir}});
  std::cout << "rendered " << (m.item_ids.size() - failures) << "/" << m.item_ids.size()
            << " heatmaps (" << provider << ")\n";
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
struct TrainArgs {
  std::string config_path, dataset, out;
  std::string regime;  // empty = take from config file / default
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, batch_size, depth, base_filters, d_layers, d_base_filters;
  std::optional<double> lr, lambda_l1, test_fraction, dropout, momentum, decay, epsilon;
};

int cmd_train(const TrainArgs& a) {
  TrainConfig cfg;
  if (!a.config_path.empty()) cfg = config_from_json(read_text(a.config_path));

  bool end2end = false;
  if (!a.regime.empty()) {
    if (a.regime == "end2end") {
      end2end = true;
      cfg.regime = Regime::End2EndStage2;
    } else {
      cfg.regime = regime_from_string(a.regime);
    }
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.depth) cfg.depth = *a.depth;
  if (a.base_filters) cfg.base_filters = *a.base_filters;
  if (a.d_layers) cfg.d_layers = *a.d_layers;
  if (a.d_base_filters) cfg.d_base_filters = *a.d_base_filters;
  if (a.lr) cfg.learning_rate = *a.lr;
  if (a.lambda_l1) cfg.lambda_l1 = *a.lambda_l1;
  if (a.test_fraction) cfg.test_fraction = *a.test_fraction;
  if (a.dropout) cfg.dropout_rate = *a.dropout;
  if (a.momentum) cfg.momentum = *a.momentum;
  if (a.decay) cfg.decay_rate = *a.decay;
  if (a.epsilon) cfg.epsilon = *a.epsilon;
  validate_config(cfg);

  json resolved = json::parse(config_to_json(cfg));
  resolved["dataset"] = a.dataset;
  resolved["out"] = a.out;
  resolved["end2end"] = end2end;
  echo_config(a.out, "train", resolved);

  if (end2end) {
    End2EndResult r = train_end2end(a.dataset, cfg, a.out);
    std::cout << "stage1 checkpoint: " << r.stage1.final_checkpoint << "\n"
              << "stage2 checkpoint: " << r.stage2.final_checkpoint << "\n";
  } else {
    TrainResult r = train(a.dataset, cfg, a.out);
    if (!r.log.records.empty()) {
      const StepRecord& last = r.log.records.back();
      std::cout << "step " << last.step << ": d_loss=" << last.d_loss
                << " g_adv=" << last.g_adv << " g_l1=" << last.g_l1 << "\n";
    }
    std::cout << "final checkpoint: " << r.final_checkpoint << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
struct InferArgs {
  std::string checkpoint, dataset, out;
  std::string stage1_checkpoint;  // end2end_stage2 checkpoints need one
  std::string split = "test";     // test | train | all
};

int cmd_infer(const InferArgs& a) {
  CheckpointData data = load_checkpoint(a.checkpoint);
  auto gen = generator_from_checkpoint(data);

  std::unique_ptr<nn::UnetGenerator<float>> stage1;
  if (!a.stage1_checkpoint.empty())
    stage1 = generator_from_checkpoint(load_checkpoint(a.stage1_checkpoint));

  Manifest m = load_manifest(a.dataset);
  auto [train_ids, test_ids] =
      split_dataset(m.item_ids, data.config.test_fraction, data.config.seed);
  std::vector<std::string> ids;
  if (a.split == "train") ids = train_ids;
  else if (a.split == "test") ids = test_ids;
  else {
    ids = m.item_ids;
  }

  fs::create_directories(a.out);
  echo_config(a.out, "infer",
              {{"checkpoint", a.checkpoint},
               {"stage1_checkpoint", a.stage1_checkpoint},
               {"dataset", a.dataset},
               {"out", a.out},
               {"split", a.split},
               {"regime", data.regime},
               {"items", ids.size()}});

  int failures = 0;
  for (const std::string& id : ids) {
    try {
      PairSet one = load_pairs(a.dataset, m, data.config.regime, {id}, stage1.get());
      nn::Tensor<float> out = gen->forward(one.cond[0], /*train=*/false);
      to_intensity_range(out);
      write_png(a.out + "/" + id + ".png", tensor_to_image(out));
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "item " << id << ": " << e.what() << "\n";
    }
  }
  std::cout << "generated " << (ids.size() - failures) << "/" << ids.size() << " images to "
            << a.out << "\n";
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
struct EvalArgs {
  std::string generated, reference, out;
  bool text_metrics = false;
  int bands = 3;
};

std::vector<std::string> png_ids(const std::string& dir) {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      ids.push_back(entry.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

int cmd_eval(const EvalArgs& a) {
  const std::vector<std::string> gen_ids = png_ids(a.generated);
  const std::set<std::string> ref_ids = [&] {
    auto v = png_ids(a.reference);
    return std::set<std::string>(v.begin(), v.end());
  }();
  if (gen_ids.empty()) throw DataError("no PNG items in " + a.generated);

  echo_config(a.out, "eval",
              {{"generated", a.generated},
               {"reference", a.reference},
               {"out", a.out},
               {"text_metrics", a.text_metrics},
               {"bands", a.bands}});

  EvalReport report;
  const SsimConfig ssim_cfg;
  const RowGeometry geometry{a.bands, 3};
  const GlyphAtlas& atlas = builtin_atlas();
  std::vector<int> gen_lengths, ref_lengths;

  int failures = 0;
  double ssim_sum = 0;
  for (const std::string& id : gen_ids) {
    try {
      if (!ref_ids.count(id)) throw DataError("no reference image for item " + id);
      ImageF gen_img = read_png(a.generated + "/" + id + ".png").image;
      ImageF ref_img = read_png(a.reference + "/" + id + ".png").image;
      const double score = ssim(gen_img, ref_img, ssim_cfg);
      report.ssim_per_item.emplace_back(id, score);
      ssim_sum += score;
      if (a.text_metrics) {
        auto gl = segment_words(binarize_text(gen_img), geometry);
        auto rl = segment_words(binarize_text(ref_img), geometry);
        gen_lengths.insert(gen_lengths.end(), gl.begin(), gl.end());
        ref_lengths.insert(ref_lengths.end(), rl.begin(), rl.end());
        GlyphReport g = recognize_glyphs(gen_img, atlas, geometry);
        report.glyph.total_chars += g.total_chars;
        report.glyph.invalid_chars += g.invalid_chars;
        for (const auto& [c, n] : g.recognized) report.glyph.recognized[c] += n;
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "item " << id << ": " << e.what() << "\n";
    }
  }

  if (!report.ssim_per_item.empty())
    report.ssim_mean = ssim_sum / static_cast<double>(report.ssim_per_item.size());
  if (a.text_metrics) {
    report.has_text_metrics = true;
    report.generated_histogram = histogram(gen_lengths);
    report.tv_distance = compare_histograms(report.generated_histogram, histogram(ref_lengths));
  }

  write_text_atomic(a.out + "/report.json", eval_report_to_json(report));
  std::cout << "ssim_mean=" << report.ssim_mean << " over " << report.ssim_per_item.size()
            << " items";
  if (a.text_metrics)
    std::cout << " tv_distance=" << report.tv_distance << " glyphs=" << report.glyph.total_chars
              << " invalid=" << report.glyph.invalid_chars;
  std::cout << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gazekit: page reconstruction from eye-movement heatmaps"};
  app.require_subcommand(1);
  int rc = 0;
  auto guard = [&rc](auto fn) {
    return [&rc, fn] {
      try {
        rc = fn();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
      }
    };
  };

  GenCorpusArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic dataset");
  gen_cmd->add_option("--kind", gen_args.kind, "newspaper | text")
      ->required()
      ->check(CLI::IsMember({"newspaper", "text"}));
  gen_cmd->add_option("--n", gen_args.n, "item count")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "corpus seed")->envname("GAZEKIT_SEED");
  gen_cmd->add_option("--out", gen_args.out, "dataset directory")
      ->required()
      ->envname("GAZEKIT_OUT");
  gen_cmd->add_option("--width", gen_args.width, "page width, px");
  gen_cmd->add_option("--height", gen_args.height, "page height, px");
  gen_cmd->add_option("--rows", gen_args.rows, "text rows per page");
  gen_cmd->add_option("--words-per-row", gen_args.words_per_row, "words per text row");
  gen_cmd->callback(guard([&] { return cmd_gen_corpus(gen_args); }));

  RenderGazeArgs render_args;
  auto* render_cmd = app.add_subcommand("render-gaze", "Render heatmaps into <dataset>/heat");
  render_cmd->add_option("--dataset", render_args.dataset, "dataset directory")
      ->required()
      ->envname("GAZEKIT_DATASET");
  render_cmd->add_option("--provider", render_args.provider, "auto | fixations | heuristic | precomputed")
      ->check(CLI::IsMember({"auto", "fixations", "heuristic", "precomputed"}));
  render_cmd->add_option("--sigma", render_args.sigma, "fixation blob std dev, px");
  render_cmd->add_option("--saliency-dir", render_args.saliency_dir,
                         "precomputed maps directory (default <dataset>/saliency)");
  render_cmd->callback(guard([&] { return cmd_render_gaze(render_args); }));

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a dataset");
  train_cmd->add_option("--config", train_args.config_path, "JSON config file")
      ->envname("GAZEKIT_CONFIG");
  train_cmd->add_option("--dataset", train_args.dataset, "dataset directory")
      ->required()
      ->envname("GAZEKIT_DATASET");
  train_cmd->add_option("--out", train_args.out, "run output directory")
      ->required()
      ->envname("GAZEKIT_OUT");
  train_cmd
      ->add_option("--regime", train_args.regime,
                   "phase1 | phase2 | text | end2end_stage2 | end2end")
      ->check(CLI::IsMember({"phase1", "phase2", "text", "end2end_stage2", "end2end"}));
  train_cmd->add_option("--seed", train_args.seed, "run seed")->envname("GAZEKIT_SEED");
  train_cmd->add_option("--epochs", train_args.epochs);
  train_cmd->add_option("--batch-size", train_args.batch_size);
  train_cmd->add_option("--lr", train_args.lr, "learning rate");
  train_cmd->add_option("--lambda-l1", train_args.lambda_l1, "L1 weight in the generator loss");
  train_cmd->add_option("--test-fraction", train_args.test_fraction);
  train_cmd->add_option("--depth", train_args.depth, "generator depth");
  train_cmd->add_option("--base-filters", train_args.base_filters);
  train_cmd->add_option("--d-layers", train_args.d_layers, "discriminator stride-2 convs");
  train_cmd->add_option("--d-base-filters", train_args.d_base_filters);
  train_cmd->add_option("--dropout", train_args.dropout, "decoder dropout rate");
  train_cmd->add_option("--momentum", train_args.momentum);
  train_cmd->add_option("--decay", train_args.decay, "RMSProp smoothing");
  train_cmd->add_option("--epsilon", train_args.epsilon, "RMSProp epsilon");
  train_cmd->callback(guard([&] { return cmd_train(train_args); }));

  InferArgs infer_args;
  auto* infer_cmd = app.add_subcommand("infer", "Generate images for a dataset split");
  infer_cmd->add_option("--checkpoint", infer_args.checkpoint, "model checkpoint")->required();
  infer_cmd->add_option("--stage1-checkpoint", infer_args.stage1_checkpoint,
                        "stage-1 checkpoint for end2end_stage2 inference");
  infer_cmd->add_option("--dataset", infer_args.dataset, "dataset directory")
      ->required()
      ->envname("GAZEKIT_DATASET");
  infer_cmd->add_option("--out", infer_args.out, "output directory")
      ->required()
      ->envname("GAZEKIT_OUT");
  infer_cmd->add_option("--split", infer_args.split, "test | train | all")
      ->check(CLI::IsMember({"test", "train", "all"}));
  infer_cmd->callback(guard([&] { return cmd_infer(infer_args); }));

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score generated images against references");
  eval_cmd->add_option("--generated", eval_args.generated, "generated images directory")
      ->required();
  eval_cmd->add_option("--reference", eval_args.reference, "reference images directory")
      ->required();
  eval_cmd->add_option("--out", eval_args.out, "report directory")
      ->required()
      ->envname("GAZEKIT_OUT");
  eval_cmd->add_flag("--text", eval_args.text_metrics,
                     "also compute segment/glyph text metrics");
  eval_cmd->add_option("--bands", eval_args.bands, "text row bands");
  eval_cmd->callback(guard([&] { return cmd_eval(eval_args); }));

  CLI11_PARSE(app, argc, argv);
  return rc;
}
