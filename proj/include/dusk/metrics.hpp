#pragma once

// Text-entry measurement: words per minute, input-stream error classification
// (C / INF / IF / F counts and the corrected/uncorrected error rates built on
// them) and reaction/stroke timing.

#include "dusk/decoder.hpp"
#include "dusk/log_record.hpp"
#include "dusk/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dusk {

/// Per-phrase WPM: ((|T| - 1) / seconds) * 60 / 5.
double wpm(std::string_view transcribed, double seconds);

/// Aggregate WPM over a corpus: (chars / 5) / (seconds / 60).
double aggregate_wpm(double chars, double seconds);

/// Unit-cost insert/delete/substitute distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

struct InputEvent {
  enum class Kind : std::uint8_t { Char, Backspace, Substitute };
  Kind kind = Kind::Char;
  char ch = 0;              // Char
  std::size_t erase = 0;    // Substitute: characters removed from the end
  std::string insert;       // Substitute: text appended afterwards

  static InputEvent character(char c) { return {Kind::Char, c, 0, {}}; }
  static InputEvent backspace() { return {Kind::Backspace, 0, 0, {}}; }
  /// A machine edit (autocorrect, suggestion, revert): not a user correction.
  static InputEvent substitute(std::size_t erase, std::string insert) {
    return {Kind::Substitute, 0, erase, std::move(insert)};
  }
};

/// Parses a compact stream: letters and spaces as typed, '<' for Backspace.
std::vector<InputEvent> parse_input_stream(std::string_view keys);

/// Text left in the buffer after applying `events` to an empty buffer.
std::string replay_input(std::span<const InputEvent> events);

struct StreamCounts {
  std::size_t correct = 0;              // C
  std::size_t incorrect_not_fixed = 0;  // INF
  std::size_t incorrect_fixed = 0;      // IF
  std::size_t fixes = 0;                // F

  bool operator==(const StreamCounts&) const = default;
};

/// Throws Error if replaying `input` does not produce `transcribed`.
StreamCounts classify_stream(std::string_view presented, std::string_view transcribed,
                             std::span<const InputEvent> input);

struct ErrorRates {
  double corrected = 0;
  double uncorrected = 0;
  double total = 0;
};

ErrorRates error_rates(const StreamCounts& c);

struct ContactTiming {
  double down = 0;
  double up = 0;
  Thumb thumb = Thumb::Left;
};

struct TimingBreakdown {
  std::vector<double> reaction_times;  // one per transition, ms
  std::vector<double> stroke_times;    // one per contact, ms
  std::size_t alternating_count = 0;
  std::size_t same_hand_count = 0;
  double alternating_reaction_mean = 0;
  double same_hand_reaction_mean = 0;
};

/// Contacts are ordered by touch-down; overlapping contacts get a zero gap.
TimingBreakdown timing_breakdown(std::span<const ContactTiming> contacts);

/// Decoder events mapped onto a user input stream. Autocorrect, suggestion
/// and revert become Substitute events; cursor and Enter events are dropped.
std::vector<InputEvent> input_stream_from_events(std::span<const KeyEvent> events);

struct PhraseMetrics {
  std::string presented;
  std::string transcribed;
  double seconds = 0;
  double wpm = 0;
  StreamCounts counts;
  ErrorRates rates;
  TimingBreakdown timing;
  std::size_t words = 0;
  std::size_t autocorrected_words = 0;
  std::size_t completed_words = 0;
  std::optional<int> block;
};

struct PhraseTrace {
  std::string presented;
  std::optional<int> block;
  std::vector<Gesture> gestures;                // in the order they were decoded
  std::vector<std::vector<KeyEvent>> events;    // decoder output per gesture
  std::vector<Thumb> thumbs;                    // inferred per gesture
};

/// Metrics for one phrase from its decoder trace. Trailing spaces at the end
/// of the input stream are dropped; time runs from the first touch-down to the
/// last touch-up of a gesture that is not an Enter.
PhraseMetrics phrase_metrics(const PhraseTrace& trace);

struct ReplayOptions {
  bool predictions_enabled = true;
};

/// Phrase markers whose extra fields carry "event": "end_phrase" close the
/// open phrase instead of starting one.
bool is_phrase_end(const GestureLogRecord& r);

/// Splits a session log at phrase markers and decodes each phrase with a
/// fresh text buffer in one shared session. Gestures outside any phrase are
/// decoded but not measured.
std::vector<PhraseTrace> replay_session(std::span<const GestureLogRecord> log,
                                        std::shared_ptr<const DecoderModel> model,
                                        const ReplayOptions& options = {});

nlohmann::json to_json(const PhraseMetrics& m);
/// Per-phrase entries plus per-block and overall means.
nlohmann::json metrics_report(std::span<const PhraseMetrics> phrases);
void write_metrics_csv(std::ostream& out, std::span<const PhraseMetrics> phrases);

}  // namespace dusk
