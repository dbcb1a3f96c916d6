#pragma once

// Two-thumb keystroke-level model of peak expert speed. Every word is
// preceded and followed by a left-thumb Space; a key selected by the same
// thumb as the previous key costs its full selection time, an alternating
// one costs half.

#include "dusk/calibration.hpp"
#include "dusk/layout.hpp"
#include "dusk/lexicon.hpp"

#include <json.hpp>

#include <span>
#include <string_view>

namespace dusk {

struct CorpusStats {
  double total_words = 0;
  double total_chars = 0;  // letters plus one space per word
  double total_seconds = 0;
  double predicted_wpm = 0;
};

/// (chars / 5) / (seconds / 60).
double predicted_wpm(double total_chars, double total_seconds);

/// Seconds to type `word` and its trailing Space. Throws Error when a key has
/// no time for its assigned thumb.
double word_time(std::string_view word, const TimingTable& timing, const Layout& layout);

/// Frequency-weighted totals. The result does not depend on entry order.
CorpusStats corpus_prediction(std::span<const LexiconEntry> corpus, const TimingTable& timing,
                              const Layout& layout);

nlohmann::json to_json(const CorpusStats& s);

}  // namespace dusk
