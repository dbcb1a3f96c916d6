#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusk/decoder.hpp"
#include "dusk/simulation.hpp"
#include "support.hpp"

#include <fstream>
#include <numbers>

using namespace dusk;

namespace {

struct Typist {
  std::shared_ptr<const DecoderModel> model;
  Simulator sim;
  Session session;

  explicit Typist(std::shared_ptr<const DecoderModel> m, bool predictions = true, double lambda = 0,
                  std::uint64_t seed = 1)
      : model(m),
        sim(m->profile(), m->layout(), lambda, seed),
        session(m, SessionOptions{predictions}) {}

  std::vector<KeyEvent> type(std::string_view text) {
    std::vector<KeyEvent> all;
    for (const auto& r : sim.type_text(text)) {
      auto ev = session.feed_touch(r.gesture);
      all.insert(all.end(), ev.begin(), ev.end());
    }
    return all;
  }

  std::vector<KeyEvent> press(KeyId key) { return session.feed_touch(sim.press(key).gesture); }
};

std::vector<KeyEvent> without_cursor(std::vector<KeyEvent> events) {
  std::erase_if(events, [](const KeyEvent& e) { return e.kind == KeyEventKind::CursorFeedback; });
  return events;
}

std::shared_ptr<const DecoderModel> model_with(Lexicon lex) {
  const auto layout = default_layout();
  return DecoderModel::create(synth_profile(layout), layout, std::move(lex));
}

}  // namespace

TEST_CASE("every letter at its mean selects that letter") {
  const auto model = test::synthetic_model(false);
  for (Thumb thumb : kThumbs) {
    for (int k = 0; k < kLetterCount; ++k) {
      const KeyId key = letter_key(k);
      const Vec2d mean = model->profile().find(key, thumb)->mean;
      const Vec2d start = rest_position(thumb, model->profile().pad);
      if (mean.norm() >= model->profile().tap_threshold_mm) {
        CHECK(select_key(*model, test::line(start, start + mean)) == key);
      }
      const auto top = top_letters(*model, StrokeInput{mean, thumb}, 3);
      REQUIRE(top.size() == 3);
      CHECK(top[0] == key);
    }
  }
}

TEST_CASE("density at the mean of an isotropic 3 mm model") {
  const auto model = test::synthetic_model(false);
  const auto l = stroke_likelihoods(*model, model->profile().find(KeyId::T, Thumb::Left)->mean,
                                    Thumb::Left);
  REQUIRE(l.size() == 26);
  CHECK(l[letter_index(KeyId::T)].density == doctest::Approx(1.0 / (2 * std::numbers::pi * 9)));
}

TEST_CASE("dog from a tap and two strokes") {
  Typist t(test::synthetic_model(false), false);
  t.type("dog ");
  CHECK(t.session.committed_text() == "dog ");
  CHECK(t.session.current_word().empty());
}

TEST_CASE("noise-free typing reproduces arbitrary strings without predictions") {
  test::Rng rng(5);
  Typist t(test::synthetic_model(false), false);
  std::string expected;
  for (int i = 0; i < 100; ++i) {
    const auto w = test::random_word(rng, 1, 9);
    t.type(w + " ");
    expected += w + " ";
  }
  CHECK(t.session.committed_text() == expected);
}

TEST_CASE("noise-free typing of in-vocabulary phrases survives autocorrect") {
  std::ifstream in(test::data_path("phrases_iv.txt"));
  std::string phrase;
  Typist t(test::synthetic_model(true), true);
  while (std::getline(in, phrase)) {
    t.session.reset_text();
    t.type(phrase + " ");
    CHECK(t.session.committed_text() == phrase + " ");
  }
}

TEST_CASE("autocorrect and revert") {
  Typist t(test::synthetic_model(true), true);
  auto events = without_cursor(t.type("thw "));
  CHECK(t.session.committed_text() == "the ");
  REQUIRE(events.size() == 5);
  CHECK(events[3].kind == KeyEventKind::AutocorrectApplied);
  CHECK(events[3].text == "the");
  CHECK(events[3].original == "thw");
  CHECK(events[4].kind == KeyEventKind::Space);

  events = t.press(KeyId::Backspace);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::AutocorrectReverted);
  CHECK(events[0].text == "thw");
  CHECK(events[0].original == "the");
  CHECK(t.session.committed_text().empty());
  CHECK(t.session.current_word() == "thw");

  // The restored literal is committed as typed.
  events = t.press(KeyId::Space);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::Space);
  CHECK(t.session.committed_text() == "thw ");
}

TEST_CASE("revert is only offered immediately after the correction") {
  Typist t(test::synthetic_model(true), true);
  t.type("thw ");
  t.type("a");
  const auto events = t.press(KeyId::Backspace);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::Backspace);
  CHECK(events[0].text == "a");
  CHECK(t.session.committed_text() == "the ");
}

TEST_CASE("out-of-vocabulary literals are kept") {
  Typist t(test::synthetic_model(true), true);
  t.type("zqxv ");
  CHECK(t.session.committed_text() == "zqxv ");
}

TEST_CASE("backspace and suggestion keys on an empty buffer are no-ops") {
  Typist t(test::synthetic_model(true), true);
  auto events = t.press(KeyId::Backspace);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::Backspace);
  CHECK(events[0].text.empty());
  CHECK(t.session.text().empty());
  CHECK(t.press(KeyId::Suggest1).empty());
  CHECK(t.press(KeyId::Suggest2).empty());
  CHECK(t.session.text().empty());
}

TEST_CASE("backspace crosses word boundaries") {
  Typist t(test::synthetic_model(false), false);
  t.type("ab c");
  t.press(KeyId::Backspace);
  t.press(KeyId::Backspace);
  CHECK(t.session.text() == "ab");
  t.press(KeyId::Backspace);
  CHECK(t.session.text() == "a");
}

TEST_CASE("enter commits the word without a space") {
  Typist t(test::synthetic_model(true), true);
  t.type("thw");
  const auto events = t.press(KeyId::Enter);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::Enter);
  CHECK(events[0].text == "thw");
  CHECK(t.session.committed_text() == "thw");
}

TEST_CASE("completions over a small lexicon") {
  const auto model = model_with(test::small_lexicon({{"the", 100}, {"they", 50}, {"thy", 1}, {"of", 200}}));
  Typist t(model, true);
  t.type("th");
  REQUIRE(t.session.suggestions().size() == 2);
  CHECK(t.session.suggestions()[0] == "the");
  CHECK(t.session.suggestions()[1] == "they");

  const auto events = t.press(KeyId::Suggest2);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == KeyEventKind::SuggestAccepted);
  CHECK(events[0].text == "they");
  CHECK(events[0].original == "th");
  CHECK(t.session.committed_text() == "they ");
  CHECK(t.session.suggestions().empty());
}

TEST_CASE("five strokes give 243 letter combinations") {
  const auto model = test::synthetic_model(true);
  std::vector<StrokeInput> strokes;
  for (char c : std::string_view("hello")) {
    const KeyId k = key_from_char(c);
    const Thumb th = model->layout().thumb_for(k);
    strokes.push_back({model->profile().find(k, th)->mean, th});
  }
  const auto set = candidate_words(*model, strokes);
  CHECK(set.combinations == 243);
  CHECK(std::find(set.words.begin(), set.words.end(), "hello") != set.words.end());
  std::vector<std::vector<KeyId>> choices;
  for (const auto& s : strokes) choices.push_back(top_letters(*model, s, 3));
  const auto combos = letter_combinations(choices);
  CHECK(combos.size() == 243);
  for (const auto& w : set.words) {
    CHECK(std::find(combos.begin(), combos.end(), w) != combos.end());
    CHECK(model->lexicon()->contains(w));
  }
}

TEST_CASE("posterior ranks the typed word first at the means") {
  const auto model = test::synthetic_model(true);
  for (const char* word : {"the", "quick", "dog", "people"}) {
    std::vector<StrokeInput> strokes;
    for (char c : std::string_view(word)) {
      const KeyId k = key_from_char(c);
      const Thumb th = model->layout().thumb_for(k);
      strokes.push_back({model->profile().find(k, th)->mean, th});
    }
    const auto cands = candidate_words(*model, strokes);
    const auto ranked = word_posterior(*model, strokes, cands.words);
    REQUIRE_FALSE(ranked.empty());
    CHECK(ranked.front().word == word);
    for (std::size_t i = 1; i < ranked.size(); ++i) {
      CHECK(ranked[i - 1].log_score >= ranked[i].log_score);
    }
  }
}

TEST_CASE("decoding is deterministic") {
  const auto model = test::synthetic_model(true);
  Typist a(model, true, 1.0, 77), b(model, true, 1.0, 77);
  CHECK(a.type("the quick brown fox ") == b.type("the quick brown fox "));
  CHECK(a.session.text() == b.session.text());
}

TEST_CASE("predictions off never consult the lexicon") {
  const auto model = test::synthetic_model(true);
  const auto before = model->lexicon()->lookups();
  Typist t(model, false, 1.0, 3);
  t.type("the quick brown fox jumps ");
  t.press(KeyId::Suggest1);
  t.press(KeyId::Backspace);
  CHECK(model->lexicon()->lookups() == before);
  CHECK(t.session.suggestions().empty());
}

TEST_CASE("out-of-order gestures are rejected without side effects") {
  Typist t(test::synthetic_model(false), false);
  t.type("ab");
  const auto late = test::tap({60, 30}, 0);
  const std::string before = t.session.text();
  CHECK_THROWS_AS(t.session.feed_touch(late), DecodeError);
  CHECK(t.session.text() == before);
  CHECK_THROWS_AS(t.session.feed_touch(Gesture{}), DecodeError);
}

TEST_CASE("strokes emit cursor feedback per sample") {
  Typist t(test::synthetic_model(false), false);
  const auto r = t.sim.type_text("g");
  REQUIRE(r.size() == 1);
  const auto events = t.session.feed_touch(r[0].gesture);
  REQUIRE(events.size() == r[0].gesture.samples.size() + 1);
  CHECK(events.front().kind == KeyEventKind::CursorFeedback);
  CHECK((events.front().cursor - key_position(t.model->layout(), KeyId::D)).norm() < 1e-9);
  CHECK((events[events.size() - 2].cursor - key_position(t.model->layout(), KeyId::G)).norm() < 1e-9);
  CHECK(events.back().kind == KeyEventKind::Char);
  CHECK(events.back().text == "g");
}

TEST_CASE("missing per-thumb models fall back only where allowed") {
  const auto layout = default_layout();
  auto profile = synth_profile(layout);
  profile.models[static_cast<int>(Thumb::Right)][letter_index(KeyId::A)].reset();
  const auto model = DecoderModel::create(profile, layout);
  const Vec2d e = profile.find(KeyId::A, Thumb::Left)->mean;
  CHECK(stroke_likelihoods(*model, e, Thumb::Right, ModelFallback::SameThumbOnly).size() == 25);
  CHECK(stroke_likelihoods(*model, e, Thumb::Right, ModelFallback::OtherThumb).size() == 26);
}

TEST_CASE("sessions require a lexicon for predictions") {
  CHECK_THROWS(Session(test::synthetic_model(false), SessionOptions{true}));
  Session s(test::synthetic_model(false), SessionOptions{false});
  CHECK_THROWS(s.set_predictions_enabled(true));
}
