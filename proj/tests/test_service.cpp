#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusk/service.hpp"
#include "dusk/simulation.hpp"
#include "support.hpp"

#include <cstdlib>
#include <fstream>

using namespace dusk;
using nlohmann::json;

namespace {

json touch(const char* kind, std::int64_t id, const Vec2d& mm, double t) {
  const PadSpec pad;
  return {{"kind", kind}, {"id", id}, {"x", mm.x() / pad.width}, {"y", mm.y() / pad.height}, {"t", t}};
}

// Sends a simulated record as down / move* / up messages; returns the replies.
std::vector<json> send(ServiceSession& s, const GestureLogRecord& r) {
  std::vector<json> replies;
  const auto& g = r.gesture;
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    const char* kind = i == 0 ? "touch_down" : i + 1 == g.samples.size() ? "touch_up" : "touch_move";
    for (auto& m : s.handle(touch(kind, g.pointer_id, g.samples[i].position(), g.samples[i].t))) {
      replies.push_back(std::move(m));
    }
  }
  return replies;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("hello") {
  ServiceSession s(test::synthetic_model(true));
  const auto h = s.hello();
  CHECK(h["kind"] == "hello");
  CHECK(h["version"] == kProtocolVersion);
  CHECK(h["pad"]["width_mm"] == 134.0);
  CHECK(h["predictions"] == true);
  CHECK(h["cursor_rate_hz"].get<double>() == doctest::Approx(60));
  CHECK(layout_from_json(h["layout"]).rows == default_layout().rows);
}

TEST_CASE("a phrase typed without noise has no uncorrected errors") {
  const auto model = test::synthetic_model(true);
  ServiceSession s(model);
  Simulator sim(model->profile(), model->layout(), 0, 1);
  auto r = s.handle({{"kind", "start_phrase"}, {"text", "the"}});
  REQUIRE(r.size() == 1);
  CHECK(r[0]["phrase"] == "the");
  for (const auto& rec : sim.type_text("the ")) send(s, rec);
  CHECK(s.session().committed_text() == "the ");
  r = s.handle({{"kind", "end_phrase"}});
  REQUIRE(r.size() == 1);
  CHECK(r[0]["kind"] == "metrics");
  CHECK(r[0]["transcribed"] == "the");
  CHECK(r[0]["uncorrected_er"] == 0.0);
  CHECK(r[0]["wpm"].get<double>() > 0);
}

TEST_CASE("errors leave the session usable") {
  ServiceSession s(test::synthetic_model(true));
  auto r = s.handle_text("{not json");
  REQUIRE(r.size() == 1);
  CHECK(r[0]["code"] == "malformed_json");
  r = s.handle(touch("touch_move", 4, {60, 30}, 0));
  CHECK(r.at(0)["code"] == "protocol");
  r = s.handle({{"kind", "touch_down"}, {"x", 2.0}, {"y", 0.5}, {"t", 0}});
  CHECK(r.at(0)["code"] == "bad_request");
  r = s.handle({{"kind", "end_phrase"}});
  CHECK(r.at(0)["code"] == "protocol");
  r = s.handle(json::array());
  CHECK(r.at(0)["code"] == "bad_request");

  // Out-of-order gesture.
  s.handle(touch("touch_down", 1, {60, 30}, 500));
  s.handle(touch("touch_up", 1, {60, 30}, 590));
  s.handle(touch("touch_down", 2, {60, 30}, 100));
  r = s.handle(touch("touch_up", 2, {60, 30}, 190));
  CHECK(r.at(0)["code"] == "decode");
  CHECK(s.session().text() == "d");
}

TEST_CASE("live cursor messages are rate limited per thumb") {
  ServiceSession s(test::synthetic_model(true));
  const Vec2d start = rest_position(Thumb::Left, PadSpec{});
  auto r = s.handle(touch("touch_down", 1, start, 0));
  REQUIRE(r.size() == 1);
  CHECK(r[0]["kind"] == "cursor");
  CHECK(r[0]["thumb"] == "left");
  CHECK(r[0]["x"].get<double>() == doctest::Approx(2.5));
  CHECK(s.handle(touch("touch_move", 1, start + Vec2d(3, 0), 10)).empty());
  r = s.handle(touch("touch_move", 1, start + Vec2d(12, 0), 20));
  REQUIRE(r.size() == 1);
  CHECK(r[0]["x"].get<double>() == doctest::Approx(3.5));
  // The other thumb has its own budget.
  r = s.handle(touch("touch_down", 2, rest_position(Thumb::Right, PadSpec{}), 21));
  REQUIRE(r.size() == 1);
  CHECK(r[0]["thumb"] == "right");
}

TEST_CASE("service transcript matches the golden replies") {
  const auto model = test::synthetic_model(true);
  ServiceSession s(model);
  std::vector<std::string> actual;
  for (const auto& line : read_lines(test::fixture_path("service_transcript.jsonl"))) {
    actual.push_back(json(s.handle_text(line)).dump());
  }
  const std::string golden_path = std::string(DUSK_FIXTURE_DIR) + "/../golden/service_transcript.jsonl";
  if (std::getenv("DUSK_UPDATE_GOLDEN")) {
    std::ofstream out(golden_path);
    for (const auto& l : actual) out << l << '\n';
  }
  const auto expected = read_lines(golden_path);
  REQUIRE(expected.size() == actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    INFO("transcript line " << i + 1);
    CHECK(actual[i] == expected[i]);
  }
  CHECK(s.session().committed_text().empty() == false);
}

TEST_CASE("server metrics equal an offline replay of the exported log") {
  const auto model = test::synthetic_model(true);
  ServiceSession s(model);
  json metrics;
  json exported;
  for (const auto& line : read_lines(test::fixture_path("service_transcript.jsonl"))) {
    for (auto& reply : s.handle_text(line)) {
      if (reply["kind"] == "metrics") metrics = reply;
      if (reply["kind"] == "log") exported = reply;
    }
  }
  REQUIRE(metrics.is_object());
  REQUIRE(exported.is_object());
  CHECK(metrics["presented"] == "the dog");
  CHECK(metrics["transcribed"] == "the dog");
  CHECK(metrics["block"] == 1);

  std::vector<GestureLogRecord> log;
  for (const auto& r : exported["records"]) log.push_back(record_from_json(r));
  CHECK(log == s.log());
  const auto traces = replay_session(log, model);
  REQUIRE(traces.size() == 1);
  const auto offline = to_json(phrase_metrics(traces[0]));
  CHECK(offline["wpm"] == metrics["wpm"]);
  CHECK(offline["counts"] == metrics["counts"]);
  json without_kind = metrics;
  without_kind.erase("kind");
  CHECK(offline == without_kind);
}
