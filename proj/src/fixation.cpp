#include "gazekit/fixation.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gazekit/errors.hpp"

namespace gazekit {

std::string trial_to_json(const TrialRecord& trial) {
  nlohmann::json j;
  j["page_id"] = trial.page_id;
  j["fixations"] = nlohmann::json::array();
  for (const auto& f : trial.fixations) {
    nlohmann::json jf;
    jf["x"] = f.x_px;
    jf["y"] = f.y_px;
    if (f.word_index) jf["word_index"] = *f.word_index;
    jf["duration_pct"] = f.duration_pct;
    j["fixations"].push_back(jf);
  }
  return j.dump(2) + "\n";
}

TrialRecord trial_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("fixation json: parse error: ") + e.what());
  }
  TrialRecord trial;
  try {
    trial.page_id = j.at("page_id").get<std::string>();
    for (const auto& jf : j.at("fixations")) {
      FixationRecord f;
      f.x_px = jf.at("x").get<double>();
      f.y_px = jf.at("y").get<double>();
      f.duration_pct = jf.at("duration_pct").get<double>();
      if (jf.contains("word_index")) f.word_index = jf.at("word_index").get<int>();
      trial.fixations.push_back(f);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("fixation json: missing or malformed field: ") + e.what());
  }
  validate_trial(trial);
  return trial;
}

TrialRecord load_trial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_trial: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return trial_from_json(ss.str());
}

void save_trial(const std::string& path, const TrialRecord& trial) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("save_trial: cannot open " + tmp);
    out << trial_to_json(trial);
  }
  std::filesystem::rename(tmp, path);
}

void validate_trial(const TrialRecord& trial) {
  double total = 0;
  for (std::size_t i = 0; i < trial.fixations.size(); ++i) {
    const auto& f = trial.fixations[i];
    if (f.duration_pct < 0)
      throw DataError("trial " + trial.page_id + ": fixation " + std::to_string(i) +
                      " has negative duration_pct");
    total += f.duration_pct;
  }
  if (total > 100.0 + 1e-9)
    throw DataError("trial " + trial.page_id + ": duration percentages sum to " +
                    std::to_string(total) + " > 100");
}

}  // namespace gazekit
