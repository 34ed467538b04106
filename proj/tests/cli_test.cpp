// End-to-end runs of the command-line binary: corpus generation, heatmap
// rendering, a tiny training run, inference, and evaluation.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "gazekit/dataset.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace gazekit;

namespace {

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, const testutil::TempDir& tmp) {
  const std::string log = tmp.sub("cli_out_" + std::to_string(std::rand()) + ".txt");
  const std::string cmd = std::string(GAZEKIT_CLI_PATH) + " " + args + " > '" + log + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult result;
  result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  if (fs::exists(log)) result.output = testutil::slurp(log);
  return result;
}

int count_pngs(const std::string& dir) {
  if (!fs::exists(dir)) return 0;
  int n = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".png") ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("running without a command fails loudly") {
  testutil::TempDir tmp;
  CHECK(run_cli("", tmp).code != 0);
  CHECK(run_cli("frobnicate", tmp).code != 0);
  CHECK(run_cli("gen-corpus --kind comic --n 1 --out " + tmp.sub("x"), tmp).code != 0);
}

TEST_CASE("the full pipeline runs through the binary" * doctest::timeout(600)) {
  testutil::TempDir tmp;
  const std::string ds = tmp.sub("ds");

  const CliResult gen = run_cli(
      "gen-corpus --kind text --n 3 --seed 5 --width 64 --height 64 --words-per-row 1 --out " +
          ds,
      tmp);
  CAPTURE(gen.output);
  REQUIRE(gen.code == 0);
  CHECK(count_pngs(ds + "/text") == 3);
  CHECK(fs::exists(ds + "/resolved_gen-corpus.json"));
  const nlohmann::json echo =
      nlohmann::json::parse(testutil::slurp(ds + "/resolved_gen-corpus.json"));
  CHECK(echo.at("command").get<std::string>() == "gen-corpus");
  CHECK(echo.at("seed").get<std::uint64_t>() == 5);

  SUBCASE("regeneration with the same arguments is byte-identical") {
    const std::string ds2 = tmp.sub("ds2");
    REQUIRE(run_cli("gen-corpus --kind text --n 3 --seed 5 --width 64 --height 64 "
                    "--words-per-row 1 --out " + ds2, tmp).code == 0);
    CHECK(testutil::trees_equal(ds + "/text", ds2 + "/text"));
    CHECK(testutil::trees_equal(ds + "/fixations", ds2 + "/fixations"));
  }

  const CliResult render = run_cli("render-gaze --dataset " + ds, tmp);
  CAPTURE(render.output);
  REQUIRE(render.code == 0);
  CHECK(count_pngs(ds + "/heat") == 3);
  CHECK(load_manifest(ds).saliency_provider == "fixations");

  const std::string run = tmp.sub("run");
  const CliResult train = run_cli(
      "train --regime text --dataset " + ds + " --out " + run +
          " --epochs 1 --depth 3 --base-filters 2 --d-layers 1 --d-base-filters 2 --seed 7",
      tmp);
  CAPTURE(train.output);
  REQUIRE(train.code == 0);
  CHECK(fs::exists(run + "/checkpoint_final.bin"));
  CHECK(fs::exists(run + "/log.csv"));
  const nlohmann::json tcfg = nlohmann::json::parse(testutil::slurp(run + "/resolved_train.json"));
  CHECK(tcfg.at("command").get<std::string>() == "train");
  CHECK(tcfg.at("epochs").get<int>() == 1);
  CHECK(tcfg.at("depth").get<int>() == 3);

  const std::string gen_dir = tmp.sub("gen");
  const CliResult infer = run_cli("infer --checkpoint " + run +
                                      "/checkpoint_final.bin --dataset " + ds + " --out " +
                                      gen_dir + " --split test",
                                  tmp);
  CAPTURE(infer.output);
  REQUIRE(infer.code == 0);
  CHECK(count_pngs(gen_dir) == 1);  // round(0.2 * 3) = 1 held-out item

  const std::string eval_dir = tmp.sub("eval");
  const CliResult eval = run_cli("eval --generated " + ds + "/text --reference " + ds +
                                     "/text --text --out " + eval_dir,
                                 tmp);
  CAPTURE(eval.output);
  REQUIRE(eval.code == 0);
  const nlohmann::json report =
      nlohmann::json::parse(testutil::slurp(eval_dir + "/report.json"));
  CHECK(report.at("ssim_mean").get<double>() == 1.0);
  CHECK(report.at("tv_distance").get<double>() == 0.0);
  CHECK(report.at("glyph").at("invalid").get<int>() == 0);

  SUBCASE("generated images evaluate against references without text metrics") {
    const std::string eval2 = tmp.sub("eval2");
    const CliResult r = run_cli("eval --generated " + gen_dir + " --reference " + ds +
                                    "/text --out " + eval2,
                                tmp);
    CAPTURE(r.output);
    REQUIRE(r.code == 0);
    const nlohmann::json rep = nlohmann::json::parse(testutil::slurp(eval2 + "/report.json"));
    CHECK(rep.at("ssim_mean").is_number());
    CHECK(rep.at("histogram").is_null());
  }
}

TEST_CASE("item-level failures surface as a nonzero exit" * doctest::timeout(300)) {
  testutil::TempDir tmp;
  const std::string ds = tmp.sub("ds");
  REQUIRE(run_cli("gen-corpus --kind text --n 2 --seed 1 --width 64 --height 64 "
                  "--words-per-row 1 --out " + ds, tmp).code == 0);
  fs::remove(ds + "/fixations/0001.json");
  const CliResult render = run_cli("render-gaze --dataset " + ds, tmp);
  CHECK(render.code == 1);
  CHECK(count_pngs(ds + "/heat") == 1);  // the intact item still rendered

  // Missing precomputed maps fail the same way.
  const CliResult pre = run_cli("render-gaze --dataset " + ds + " --provider precomputed", tmp);
  CHECK(pre.code == 1);
}

TEST_CASE("training rejects a regime/corpus mismatch through the binary") {
  testutil::TempDir tmp;
  const std::string ds = tmp.sub("ds");
  REQUIRE(run_cli("gen-corpus --kind text --n 2 --seed 1 --width 64 --height 64 "
                  "--words-per-row 1 --out " + ds, tmp).code == 0);
  REQUIRE(run_cli("render-gaze --dataset " + ds, tmp).code == 0);
  const CliResult r =
      run_cli("train --regime phase1 --dataset " + ds + " --out " + tmp.sub("run"), tmp);
  CHECK(r.code == 1);
  CHECK(r.output.find("error:") != std::string::npos);
}

}  // TEST_SUITE
