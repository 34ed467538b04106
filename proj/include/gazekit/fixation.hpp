#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gazekit {

struct FixationRecord {
  double x_px = 0;
  double y_px = 0;
  std::optional<int> word_index;  // present for text trials
  double duration_pct = 0;        // share of total trial time, in percent
};

struct TrialRecord {
  std::string page_id;
  std::vector<FixationRecord> fixations;
};

// JSON schema: {page_id, fixations: [{x, y, word_index?, duration_pct}]}
std::string trial_to_json(const TrialRecord& trial);
TrialRecord trial_from_json(const std::string& json_text);

TrialRecord load_trial(const std::string& path);
void save_trial(const std::string& path, const TrialRecord& trial);

// Duration percentages must be nonnegative and sum to at most 100.
void validate_trial(const TrialRecord& trial);

}  // namespace gazekit
