#include "gazekit/eval/report.hpp"

#include <json.hpp>

namespace gazekit {

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["ssim_mean"] = report.ssim_mean;
  j["ssim_per_item"] = nlohmann::json::object();
  for (const auto& [item, score] : report.ssim_per_item) j["ssim_per_item"][item] = score;
  if (report.has_text_metrics) {
    j["histogram"] = nlohmann::json::object();
    for (const auto& [len, count] : report.generated_histogram.bins)
      j["histogram"][std::to_string(len)] = count;
    j["tv_distance"] = report.tv_distance;
    j["glyph"] = {{"total", report.glyph.total_chars},
                  {"invalid", report.glyph.invalid_chars}};
  } else {
    j["histogram"] = nullptr;
    j["tv_distance"] = nullptr;
    j["glyph"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace gazekit
