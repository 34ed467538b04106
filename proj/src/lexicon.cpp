#include "gazekit/lexicon.hpp"

#include <algorithm>
#include <map>

namespace gazekit {

namespace {

const char* kWords[] = {
    // length 2
    "an", "at", "be", "by", "do", "go", "in", "of",
    // length 3 (modal band)
    "the", "and", "for", "are", "but", "not", "you", "all", "can", "had",
    "her", "was", "one", "our", "out", "day", "get", "has", "him", "his",
    "how", "man", "new", "now", "old", "see", "two", "way", "who", "boy",
    "did", "its", "let", "put", "say", "she", "too", "use", "end", "why",
    // length 4
    "that", "with", "have", "this", "will", "your", "from", "they", "know",
    "want", "been", "good", "much", "some", "time", "very", "when", "come",
    "here", "just", "like", "long", "make", "many", "over", "such",
    // length 5
    "about", "after", "again", "below", "could", "every", "first", "found",
    "great", "house", "large", "place", "sound", "water",
    // length 6
    "always", "animal", "around", "before", "change", "follow", "letter",
    "mother",
    // length 7
    "another", "between", "country", "picture",
};

}  // namespace

const std::vector<std::string>& lexicon() {
  static const std::vector<std::string> words(std::begin(kWords), std::end(kWords));
  return words;
}

int lexicon_modal_length() {
  static const int modal = [] {
    std::map<int, int> counts;
    for (const auto& w : lexicon()) counts[static_cast<int>(w.size())]++;
    return std::max_element(counts.begin(), counts.end(),
                            [](const auto& a, const auto& b) { return a.second < b.second; })
        ->first;
  }();
  return modal;
}

std::string sample_word(std::mt19937_64& rng) {
  const auto& words = lexicon();
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  return words[pick(rng)];
}

}  // namespace gazekit
