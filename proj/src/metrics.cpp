#include "dusk/metrics.hpp"

#include "dusk/recognizer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

namespace dusk {

namespace {

double mean(std::span<const double> v) {
  if (v.empty()) return 0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool is_phrase_end(const GestureLogRecord& r) {
  return r.is_phrase_marker() && r.extra.contains("event") && r.extra["event"] == "end_phrase";
}

double wpm(std::string_view transcribed, double seconds) {
  if (!(seconds > 0)) throw Error("wpm: duration must be positive");
  if (transcribed.empty()) throw Error("wpm: empty transcription");
  return (static_cast<double>(transcribed.size()) - 1.0) / seconds * 60.0 / 5.0;
}

double aggregate_wpm(double chars, double seconds) {
  if (!(seconds > 0)) throw Error("aggregate_wpm: duration must be positive");
  return (chars / 5.0) / (seconds / 60.0);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), row(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({prev[j] + 1, row[j - 1] + 1, substitute});
    }
    std::swap(prev, row);
  }
  return prev[b.size()];
}

std::vector<InputEvent> parse_input_stream(std::string_view keys) {
  std::vector<InputEvent> out;
  out.reserve(keys.size());
  for (char c : keys) out.push_back(c == '<' ? InputEvent::backspace() : InputEvent::character(c));
  return out;
}

namespace {

// Replays `events`, counting user backspaces and the characters they erase.
std::string replay_counting(std::span<const InputEvent> events, std::size_t* fixes,
                            std::size_t* erased) {
  std::string buffer;
  for (const auto& e : events) {
    switch (e.kind) {
      case InputEvent::Kind::Char:
        buffer.push_back(e.ch);
        break;
      case InputEvent::Kind::Backspace:
        if (fixes) ++*fixes;
        if (!buffer.empty()) {
          buffer.pop_back();
          if (erased) ++*erased;
        }
        break;
      case InputEvent::Kind::Substitute:
        if (e.erase > buffer.size()) throw Error("input stream substitutes past the buffer start");
        buffer.resize(buffer.size() - e.erase);
        buffer += e.insert;
        break;
    }
  }
  return buffer;
}

}  // namespace

std::string replay_input(std::span<const InputEvent> events) {
  return replay_counting(events, nullptr, nullptr);
}

StreamCounts classify_stream(std::string_view presented, std::string_view transcribed,
                             std::span<const InputEvent> input) {
  StreamCounts c;
  const std::string replayed = replay_counting(input, &c.fixes, &c.incorrect_fixed);
  if (replayed != transcribed) {
    throw Error("input stream replays to '" + replayed + "', not the transcribed '" +
                std::string(transcribed) + "'");
  }
  c.incorrect_not_fixed = levenshtein(presented, transcribed);
  c.correct = std::max(presented.size(), transcribed.size()) - c.incorrect_not_fixed;
  return c;
}

ErrorRates error_rates(const StreamCounts& c) {
  const double denominator =
      static_cast<double>(c.correct + c.incorrect_not_fixed + c.incorrect_fixed);
  if (denominator <= 0) throw Error("error_rates: no characters");
  ErrorRates r;
  r.uncorrected = static_cast<double>(c.incorrect_not_fixed) / denominator;
  r.corrected = static_cast<double>(c.incorrect_fixed) / denominator;
  r.total = r.corrected + r.uncorrected;
  return r;
}

TimingBreakdown timing_breakdown(std::span<const ContactTiming> contacts) {
  std::vector<ContactTiming> ordered(contacts.begin(), contacts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.down < b.down; });
  TimingBreakdown out;
  std::vector<double> alternating, same;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    out.stroke_times.push_back(ordered[i].up - ordered[i].down);
    if (i == 0) continue;
    const double reaction = std::max(0.0, ordered[i].down - ordered[i - 1].up);
    out.reaction_times.push_back(reaction);
    (ordered[i].thumb == ordered[i - 1].thumb ? same : alternating).push_back(reaction);
  }
  out.alternating_count = alternating.size();
  out.same_hand_count = same.size();
  out.alternating_reaction_mean = mean(alternating);
  out.same_hand_reaction_mean = mean(same);
  return out;
}

std::vector<InputEvent> input_stream_from_events(std::span<const KeyEvent> events) {
  std::vector<InputEvent> out;
  for (const auto& e : events) {
    switch (e.kind) {
      case KeyEventKind::Char:
        out.push_back(InputEvent::character(e.text.at(0)));
        break;
      case KeyEventKind::Space:
        out.push_back(InputEvent::character(' '));
        break;
      case KeyEventKind::Backspace:
        out.push_back(InputEvent::backspace());
        break;
      case KeyEventKind::AutocorrectApplied:
        out.push_back(InputEvent::substitute(e.original.size(), e.text));
        break;
      case KeyEventKind::AutocorrectReverted:
        // The buffer ends with the replacement and its space.
        out.push_back(InputEvent::substitute(e.original.size() + 1, e.text));
        break;
      case KeyEventKind::SuggestAccepted:
        out.push_back(InputEvent::substitute(e.original.size(), e.text + " "));
        break;
      case KeyEventKind::Enter:
      case KeyEventKind::CursorFeedback:
        break;
    }
  }
  return out;
}

PhraseMetrics phrase_metrics(const PhraseTrace& trace) {
  PhraseMetrics m;
  m.presented = trace.presented;
  m.block = trace.block;

  std::vector<KeyEvent> flat;
  for (const auto& per_gesture : trace.events) flat.insert(flat.end(), per_gesture.begin(), per_gesture.end());
  auto input = input_stream_from_events(flat);
  std::string transcribed = replay_input(input);
  std::size_t trailing = 0;
  while (trailing < transcribed.size() && transcribed[transcribed.size() - 1 - trailing] == ' ') {
    ++trailing;
  }
  if (trailing > 0) {
    input.push_back(InputEvent::substitute(trailing, {}));
    transcribed.resize(transcribed.size() - trailing);
  }
  m.transcribed = transcribed;

  if (m.presented.empty() && m.transcribed.empty()) {
    // Nothing to classify.
  } else {
    m.counts = classify_stream(m.presented, m.transcribed, input);
    m.rates = error_rates(m.counts);
  }

  std::vector<ContactTiming> contacts;
  std::optional<double> first_down, last_up;
  for (std::size_t i = 0; i < trace.gestures.size(); ++i) {
    const auto& g = trace.gestures[i];
    contacts.push_back({g.down_time(), g.up_time(), trace.thumbs.at(i)});
    const bool is_enter = std::any_of(trace.events[i].begin(), trace.events[i].end(),
                                      [](const auto& e) { return e.kind == KeyEventKind::Enter; });
    if (is_enter) continue;
    first_down = first_down ? std::min(*first_down, g.down_time()) : g.down_time();
    last_up = last_up ? std::max(*last_up, g.up_time()) : g.up_time();
  }
  m.timing = timing_breakdown(contacts);
  if (first_down && last_up) m.seconds = (*last_up - *first_down) / 1000.0;
  if (m.seconds > 0 && !m.transcribed.empty()) m.wpm = wpm(m.transcribed, m.seconds);

  std::size_t reverted = 0;
  for (const auto& e : flat) {
    if (e.kind == KeyEventKind::AutocorrectApplied) ++m.autocorrected_words;
    if (e.kind == KeyEventKind::AutocorrectReverted) ++reverted;
    if (e.kind == KeyEventKind::SuggestAccepted) ++m.completed_words;
  }
  m.autocorrected_words -= std::min(reverted, m.autocorrected_words);
  bool in_word = false;
  for (char c : m.transcribed) {
    if (c != ' ' && !in_word) ++m.words;
    in_word = c != ' ';
  }
  return m;
}

std::vector<PhraseTrace> replay_session(std::span<const GestureLogRecord> log,
                                        std::shared_ptr<const DecoderModel> model,
                                        const ReplayOptions& options) {
  Session session(model, SessionOptions{options.predictions_enabled});
  std::vector<PhraseTrace> out;
  bool open = false;
  for (const auto& r : log) {
    if (r.is_phrase_marker()) {
      if (is_phrase_end(r)) {
        open = false;
        continue;
      }
      session.reset_text();
      PhraseTrace trace;
      trace.presented = *r.phrase;
      if (r.extra.contains("block") && r.extra["block"].is_number_integer()) {
        trace.block = r.extra["block"].get<int>();
      }
      out.push_back(std::move(trace));
      open = true;
      continue;
    }
    auto events = session.feed_touch(r.gesture);
    if (!open) continue;
    auto& trace = out.back();
    trace.events.push_back(std::move(events));
    trace.gestures.push_back(r.gesture);
    trace.thumbs.push_back(infer_thumb(r.gesture, model->profile().pad));
  }
  return out;
}

nlohmann::json to_json(const PhraseMetrics& m) {
  nlohmann::json j = {
      {"presented", m.presented},
      {"transcribed", m.transcribed},
      {"seconds", m.seconds},
      {"wpm", m.wpm},
      {"corrected_er", m.rates.corrected},
      {"uncorrected_er", m.rates.uncorrected},
      {"total_er", m.rates.total},
      {"counts",
       {{"C", m.counts.correct},
        {"INF", m.counts.incorrect_not_fixed},
        {"IF", m.counts.incorrect_fixed},
        {"F", m.counts.fixes}}},
      {"reaction_ms",
       {{"mean", mean(m.timing.reaction_times)},
        {"alternating_mean", m.timing.alternating_reaction_mean},
        {"same_hand_mean", m.timing.same_hand_reaction_mean},
        {"alternating_count", m.timing.alternating_count},
        {"same_hand_count", m.timing.same_hand_count}}},
      {"stroke_ms", {{"mean", mean(m.timing.stroke_times)}}},
      {"words", m.words},
      {"autocorrected_words", m.autocorrected_words},
      {"completed_words", m.completed_words},
  };
  if (m.block) j["block"] = *m.block;
  return j;
}

nlohmann::json metrics_report(std::span<const PhraseMetrics> phrases) {
  auto summarize = [](const std::vector<const PhraseMetrics*>& group) {
    std::vector<double> w, corrected, uncorrected, reaction, stroke;
    std::size_t words = 0, autocorrected = 0, completed = 0;
    for (const auto* m : group) {
      w.push_back(m->wpm);
      corrected.push_back(m->rates.corrected);
      uncorrected.push_back(m->rates.uncorrected);
      reaction.push_back(mean(m->timing.reaction_times));
      stroke.push_back(mean(m->timing.stroke_times));
      words += m->words;
      autocorrected += m->autocorrected_words;
      completed += m->completed_words;
    }
    auto share = [&](std::size_t n) { return words ? static_cast<double>(n) / words : 0.0; };
    return nlohmann::json{{"phrases", group.size()},
                          {"wpm", mean(w)},
                          {"corrected_er", mean(corrected)},
                          {"uncorrected_er", mean(uncorrected)},
                          {"reaction_ms_mean", mean(reaction)},
                          {"stroke_ms_mean", mean(stroke)},
                          {"autocorrect_share", share(autocorrected)},
                          {"completion_share", share(completed)}};
  };

  nlohmann::json per_phrase = nlohmann::json::array();
  std::map<int, std::vector<const PhraseMetrics*>> blocks;
  std::vector<const PhraseMetrics*> all;
  for (const auto& m : phrases) {
    per_phrase.push_back(to_json(m));
    all.push_back(&m);
    if (m.block) blocks[*m.block].push_back(&m);
  }
  nlohmann::json per_block = nlohmann::json::array();
  for (const auto& [block, group] : blocks) {
    auto j = summarize(group);
    j["block"] = block;
    per_block.push_back(std::move(j));
  }
  return {{"phrases", per_phrase}, {"blocks", per_block}, {"overall", summarize(all)}};
}

void write_metrics_csv(std::ostream& out, std::span<const PhraseMetrics> phrases) {
  out << "phrase,block,presented,transcribed,seconds,wpm,corrected_er,uncorrected_er,total_er,"
         "reaction_ms_mean,stroke_ms_mean\n";
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    const auto& m = phrases[i];
    out << i << ',' << (m.block ? std::to_string(*m.block) : "") << ',' << csv_quote(m.presented)
        << ',' << csv_quote(m.transcribed) << ',' << m.seconds << ',' << m.wpm << ','
        << m.rates.corrected << ',' << m.rates.uncorrected << ',' << m.rates.total << ','
        << mean(m.timing.reaction_times) << ',' << mean(m.timing.stroke_times) << '\n';
  }
}

}  // namespace dusk
