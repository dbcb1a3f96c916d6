#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusk/metrics.hpp"
#include "dusk/simulation.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace dusk;

TEST_CASE("words per minute") {
  CHECK(wpm("the cat", 14.4) == doctest::Approx(5.0));
  CHECK(wpm("a", 10) == 0.0);
  CHECK_THROWS(wpm("abc", 0));
  CHECK_THROWS(wpm("", 3));
  CHECK(aggregate_wpm(10, 6) == doctest::Approx(20.0));
}

TEST_CASE("levenshtein matches the recursive definition") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  test::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto a = test::random_word(rng, 0, 8, 4);
    const auto b = test::random_word(rng, 0, 8, 4);
    REQUIRE(levenshtein(a, b) == static_cast<std::size_t>(oracle::levenshtein_recursive(a, b)));
    CHECK(levenshtein(a, b) == levenshtein(b, a));
  }
}

TEST_CASE("classification: corrected error") {
  const auto input = parse_input_stream("tj<he");
  const auto c = classify_stream("the", "the", input);
  CHECK(c == StreamCounts{3, 0, 1, 1});
  const auto r = error_rates(c);
  CHECK(r.corrected == doctest::Approx(0.25));
  CHECK(r.uncorrected == 0.0);
}

TEST_CASE("classification: uncorrected error") {
  const auto c = classify_stream("the", "thw", parse_input_stream("thw"));
  CHECK(c == StreamCounts{2, 1, 0, 0});
  CHECK(error_rates(c).uncorrected == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("classification: backspace on an empty buffer is a fix without an erased char") {
  const auto c = classify_stream("a", "a", parse_input_stream("<a"));
  CHECK(c == StreamCounts{1, 0, 0, 1});
}

TEST_CASE("classification: machine substitutions are not user fixes") {
  std::vector<InputEvent> input = parse_input_stream("thw");
  input.push_back(InputEvent::substitute(3, "the"));
  const auto c = classify_stream("the", "the", input);
  CHECK(c == StreamCounts{3, 0, 0, 0});
  CHECK_THROWS(classify_stream("the", "thx", input));
  std::vector<InputEvent> bad{InputEvent::substitute(2, "x")};
  CHECK_THROWS(replay_input(bad));
}

TEST_CASE("classification invariants on random streams") {
  test::Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto presented = test::random_word(rng, 1, 8, 4);
    std::string keys;
    const int n = test::uniform_int(rng, 1, 14);
    for (int k = 0; k < n; ++k) {
      keys.push_back(test::uniform_int(rng, 0, 4) == 0 ? '<'
                                                        : static_cast<char>('a' + test::uniform_int(rng, 0, 3)));
    }
    const auto input = parse_input_stream(keys);
    const auto transcribed = replay_input(input);
    const auto c = classify_stream(presented, transcribed, input);
    CHECK(c.correct + c.incorrect_not_fixed == std::max(presented.size(), transcribed.size()));
    CHECK(c.incorrect_fixed <= c.fixes);
    CHECK(c.fixes == static_cast<std::size_t>(std::count(keys.begin(), keys.end(), '<')));
    if (c.correct + c.incorrect_not_fixed + c.incorrect_fixed > 0) {
      const auto r = error_rates(c);
      CHECK(r.total == doctest::Approx(r.corrected + r.uncorrected));
      CHECK(r.total <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("reaction and stroke times") {
  const std::vector<ContactTiming> contacts{
      {0, 100, Thumb::Left}, {300, 400, Thumb::Right}, {700, 800, Thumb::Right}, {790, 850, Thumb::Left}};
  const auto t = timing_breakdown(contacts);
  CHECK(t.stroke_times == std::vector<double>{100, 100, 100, 60});
  CHECK(t.reaction_times == std::vector<double>{200, 300, 0});
  CHECK(t.alternating_count == 2);
  CHECK(t.same_hand_count == 1);
  CHECK(t.alternating_reaction_mean == doctest::Approx(100));
  CHECK(t.same_hand_reaction_mean == doctest::Approx(300));
}

TEST_CASE("decoder events become an input stream") {
  auto ev = [](KeyEventKind k, std::string text = {}, std::string original = {}) {
    KeyEvent e;
    e.kind = k;
    e.text = std::move(text);
    e.original = std::move(original);
    return e;
  };
  const std::vector<KeyEvent> events{
      ev(KeyEventKind::Char, "t"),  ev(KeyEventKind::Char, "h"),
      ev(KeyEventKind::Char, "w"),  ev(KeyEventKind::AutocorrectApplied, "the", "thw"),
      ev(KeyEventKind::Space, " "), ev(KeyEventKind::AutocorrectReverted, "thw", "the"),
      ev(KeyEventKind::Backspace, "w"), ev(KeyEventKind::CursorFeedback),
      ev(KeyEventKind::Char, "y"),  ev(KeyEventKind::SuggestAccepted, "they", "thy"),
      ev(KeyEventKind::Enter, "")};
  const auto input = input_stream_from_events(events);
  CHECK(replay_input(input) == "they ");
  std::size_t backspaces = 0;
  for (const auto& e : input) backspaces += e.kind == InputEvent::Kind::Backspace;
  CHECK(backspaces == 1);
}

namespace {

std::vector<PhraseMetrics> simulate_and_measure(double lambda, std::uint64_t seed,
                                                const std::vector<std::string>& phrases,
                                                bool predictions = true) {
  const auto model = test::synthetic_model(true);
  Simulator sim(model->profile(), model->layout(), lambda, seed);
  const auto log = sim.session_log(phrases);
  std::vector<PhraseMetrics> out;
  for (const auto& trace : replay_session(log, model, {predictions})) out.push_back(phrase_metrics(trace));
  return out;
}

std::vector<std::string> iv_phrases() {
  std::ifstream in(test::data_path("phrases_iv.txt"));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("noise-free simulated session is error free") {
  const auto phrases = iv_phrases();
  REQUIRE(phrases.size() == 20);
  const auto metrics = simulate_and_measure(0, 1, phrases);
  REQUIRE(metrics.size() == phrases.size());
  for (const auto& m : metrics) {
    CHECK(m.transcribed == m.presented);
    CHECK(m.counts.incorrect_not_fixed == 0);
    CHECK(m.counts.fixes == 0);
    CHECK(m.wpm > 0);
    CHECK(m.autocorrected_words == 0);
  }
}

TEST_CASE("replayed transcription equals the session text") {
  const auto model = test::synthetic_model(true);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Simulator sim(model->profile(), model->layout(), 1.5, seed);
    std::vector<GestureLogRecord> log;
    GestureLogRecord marker;
    marker.phrase = "the quick brown fox";
    log.push_back(marker);
    for (auto& r : sim.type_text("the quick brown fox")) log.push_back(std::move(r));
    log.push_back(sim.press(KeyId::Backspace));
    log.push_back(sim.press(KeyId::Backspace));
    for (auto& r : sim.type_text("ox ")) log.push_back(std::move(r));

    Session direct(model);
    for (const auto& r : log) {
      if (!r.is_phrase_marker()) direct.feed_touch(r.gesture);
    }
    const auto traces = replay_session(log, model);
    REQUIRE(traces.size() == 1);
    const auto m = phrase_metrics(traces[0]);
    std::string expected = direct.text();
    while (!expected.empty() && expected.back() == ' ') expected.pop_back();
    CHECK(m.transcribed == expected);
    CHECK(m.counts.fixes >= 2);
  }
}

TEST_CASE("phrase time excludes Enter and end markers close phrases") {
  const auto model = test::synthetic_model(false);
  Simulator sim(model->profile(), model->layout(), 0, 1);
  std::vector<GestureLogRecord> log;
  GestureLogRecord marker;
  marker.phrase = "ab";
  marker.extra["block"] = 2;
  log.push_back(marker);
  for (auto& r : sim.type_text("ab")) log.push_back(std::move(r));
  log.push_back(sim.press(KeyId::Enter));
  GestureLogRecord end;
  end.phrase = "ab";
  end.extra["event"] = "end_phrase";
  log.push_back(end);
  for (auto& r : sim.type_text("zz")) log.push_back(std::move(r));

  const auto traces = replay_session(log, model, {false});
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].gestures.size() == 3);
  const auto m = phrase_metrics(traces[0]);
  CHECK(m.transcribed == "ab");
  CHECK(m.block == 2);
  const double expected = (traces[0].gestures[1].up_time() - traces[0].gestures[0].down_time()) / 1000;
  CHECK(m.seconds == doctest::Approx(expected));
  CHECK(m.wpm == doctest::Approx(wpm("ab", expected)));
}

TEST_CASE("report and CSV") {
  const auto metrics = simulate_and_measure(1.0, 4, {"the cat", "a dog"});
  const auto report = metrics_report(metrics);
  CHECK(report["phrases"].size() == 2);
  CHECK(report["overall"]["phrases"] == 2);
  CHECK(report["overall"]["wpm"].get<double>() ==
        doctest::Approx((metrics[0].wpm + metrics[1].wpm) / 2));
  const auto j = to_json(metrics[0]);
  for (const char* key : {"presented", "transcribed", "seconds", "wpm", "corrected_er", "uncorrected_er",
                          "total_er", "counts", "reaction_ms", "stroke_ms", "words"}) {
    CHECK(j.contains(key));
  }
  std::ostringstream csv;
  write_metrics_csv(csv, metrics);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("phrase,block,presented,transcribed,seconds,wpm", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 2);
}
