#include "dusk/expert_model.hpp"

#include <algorithm>
#include <vector>

namespace dusk {

double predicted_wpm(double total_chars, double total_seconds) {
  if (!(total_seconds > 0)) throw Error("predicted_wpm: total time must be positive");
  return (total_chars / 5.0) / (total_seconds / 60.0);
}

double word_time(std::string_view word, const TimingTable& timing, const Layout& layout) {
  Thumb previous = Thumb::Left;  // the Space before the word
  double ms = 0;
  auto select = [&](KeyId key) {
    const Thumb thumb = layout.thumb_for(key);
    const double t = timing.at(key, thumb);
    ms += thumb == previous ? t : t / 2.0;
    previous = thumb;
  };
  if (!is_lowercase_word(word)) throw Error("word_time: '" + std::string(word) + "' is not a-z");
  for (char c : word) select(key_from_char(c));
  select(KeyId::Space);
  return ms / 1000.0;
}

CorpusStats corpus_prediction(std::span<const LexiconEntry> corpus, const TimingTable& timing,
                              const Layout& layout) {
  if (corpus.empty()) throw Error("corpus_prediction: empty corpus");
  // Fixed reduction order so the sums are reproducible whatever the input order.
  std::vector<const LexiconEntry*> ordered;
  ordered.reserve(corpus.size());
  for (const auto& e : corpus) ordered.push_back(&e);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->word != b->word ? a->word < b->word : a->count < b->count;
  });

  CorpusStats s;
  for (const auto* e : ordered) {
    const auto n = static_cast<double>(e->count);
    s.total_words += n;
    s.total_chars += n * static_cast<double>(e->word.size() + 1);
    s.total_seconds += n * word_time(e->word, timing, layout);
  }
  s.predicted_wpm = predicted_wpm(s.total_chars, s.total_seconds);
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  return {{"total_words", s.total_words},
          {"total_chars", s.total_chars},
          {"total_seconds", s.total_seconds},
          {"predicted_wpm", s.predicted_wpm}};
}

}  // namespace dusk
