#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gazekit {

// Fixed lowercase word list for the synthetic corpus. Word lengths peak at
// 3-4 characters so segment-length histograms have a stable mode.
const std::vector<std::string>& lexicon();

// Modal word length of the lexicon under uniform sampling.
int lexicon_modal_length();

std::string sample_word(std::mt19937_64& rng);

}  // namespace gazekit
