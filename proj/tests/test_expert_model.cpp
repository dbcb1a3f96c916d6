#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusk/expert_model.hpp"
#include "support.hpp"

#include <fstream>

using namespace dusk;

namespace {

TimingTable uniform_table(const Layout& layout, double ms) {
  TimingTable t;
  for (int k = 0; k < kLetterCount; ++k) t.set(letter_key(k), layout.thumb_for(letter_key(k)), ms);
  t.set(KeyId::Space, layout.thumb_for(KeyId::Space), ms);
  return t;
}

}  // namespace

TEST_CASE("single letter word") {
  const auto layout = default_layout();
  const auto t = uniform_table(layout, 500);
  // 'a' (left, first press full) then Space on the same thumb: 500 + 500.
  CHECK(word_time("a", t, layout) == doctest::Approx(1.0));
  CHECK(predicted_wpm(2, 1.0) == doctest::Approx(24.0));
  CHECK_THROWS(predicted_wpm(2, 0));
}

TEST_CASE("hand trace for a two-letter word") {
  const auto layout = default_layout();
  TimingTable t = uniform_table(layout, 400);
  t.set(KeyId::O, Thumb::Right, 300);
  t.set(KeyId::K, Thumb::Right, 200);
  t.set(KeyId::Space, Thumb::Left, 100);
  // o: right thumb, first key after a left-thumb start: 300 / 2.
  // k: same thumb as o: 200. Space: alternates back to left: 100 / 2.
  CHECK(word_time("ok", t, layout) == doctest::Approx((150 + 200 + 50) / 1000.0));
}

TEST_CASE("alternation is never slower than the same thumb") {
  const auto layout = default_layout();
  const auto t = uniform_table(layout, 400);
  // f,j alternate; f,g stay on the left.
  CHECK(word_time("fj", t, layout) < word_time("fg", t, layout));
  test::Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto w = test::random_word(rng, 1, 7);
    double all_full = 0;
    for (std::size_t j = 0; j <= w.size(); ++j) all_full += 0.4;
    CHECK(word_time(w, t, layout) <= all_full + 1e-12);
    CHECK(word_time(w, t, layout) >= all_full / 2 - 1e-12);
  }
}

TEST_CASE("doubling every entry halves predicted speed") {
  const auto layout = default_layout();
  const Lexicon lex({{"the", 10}, {"of", 7}, {"hello", 3}});
  const auto base = uniform_table(layout, 333);
  TimingTable doubled;
  for (const auto& [key, ms] : base.entries()) doubled.set(key.first, key.second, 2 * ms);
  const auto a = corpus_prediction(lex.entries(), base, layout);
  const auto b = corpus_prediction(lex.entries(), doubled, layout);
  CHECK(b.predicted_wpm == doctest::Approx(a.predicted_wpm / 2));
}

TEST_CASE("corpus prediction ignores order and counts characters with spaces") {
  const auto layout = default_layout();
  const auto t = uniform_table(layout, 250);
  std::vector<LexiconEntry> words{{"the", 1}, {"of", 1}, {"and", 1}};
  const auto a = corpus_prediction(words, t, layout);
  std::reverse(words.begin(), words.end());
  const auto b = corpus_prediction(words, t, layout);
  CHECK(a.predicted_wpm == b.predicted_wpm);
  CHECK(a.total_chars == 3 + 1 + 2 + 1 + 3 + 1);
  CHECK(a.total_words == 3);
  CHECK_THROWS(corpus_prediction(std::span<const LexiconEntry>{}, t, layout));
}

TEST_CASE("missing timing or non a-z words are errors") {
  const auto layout = default_layout();
  TimingTable t = uniform_table(layout, 250);
  CHECK_THROWS(word_time("don't", t, layout));
  TimingTable partial;
  partial.set(KeyId::A, Thumb::Left, 100);
  CHECK_THROWS(word_time("ab", partial, layout));
}

TEST_CASE("bundled synthetic timing table covers the layout") {
  std::ifstream in(test::data_path("timing_synthetic.csv"));
  REQUIRE(in);
  const auto t = read_timing_csv(in);
  const auto layout = default_layout();
  CHECK(t.missing(layout).empty());
  const auto stats = corpus_prediction(test::bundled_lexicon().entries(), t, layout);
  MESSAGE("predicted WPM on synthetic timing: " << stats.predicted_wpm);
  CHECK(stats.predicted_wpm > 10);
  CHECK(stats.predicted_wpm < 100);
}
