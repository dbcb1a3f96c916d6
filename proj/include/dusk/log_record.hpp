#pragma once

#include "dusk/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace dusk {

/// One line of a gesture log. Calibration logs carry a target key; session
/// logs omit it and may interleave phrase markers (records with `phrase` set
/// and no samples). Unknown JSON fields ride along in `extra`.
struct GestureLogRecord {
  std::optional<KeyId> target_key;
  std::optional<Thumb> thumb;
  std::optional<double> stimulus_t;
  std::optional<std::int64_t> pointer_id;
  std::optional<std::string> phrase;
  Gesture gesture;
  nlohmann::json extra = nlohmann::json::object();

  bool is_phrase_marker() const { return phrase.has_value() && gesture.samples.empty(); }
  bool operator==(const GestureLogRecord&) const = default;
};

nlohmann::json to_json(const GestureLogRecord& r);
/// Throws ParseError (without line information) on schema violations.
GestureLogRecord record_from_json(const nlohmann::json& j);

}  // namespace dusk
