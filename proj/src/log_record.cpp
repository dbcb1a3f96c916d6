#include "dusk/log_record.hpp"

#include <algorithm>

namespace dusk {

namespace {
constexpr const char* kKnownFields[] = {"target_key", "thumb",  "stimulus_t",
                                        "pointer_id", "phrase", "samples"};
}

nlohmann::json to_json(const GestureLogRecord& r) {
  nlohmann::json j = r.extra.is_object() ? r.extra : nlohmann::json::object();
  if (r.target_key) j["target_key"] = to_string(*r.target_key);
  if (r.thumb) j["thumb"] = to_string(*r.thumb);
  if (r.stimulus_t) j["stimulus_t"] = *r.stimulus_t;
  if (r.pointer_id) j["pointer_id"] = *r.pointer_id;
  if (r.phrase) j["phrase"] = *r.phrase;
  if (!r.gesture.samples.empty() || !r.phrase) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : r.gesture.samples) samples.push_back({s.x, s.y, s.t});
    j["samples"] = std::move(samples);
  }
  return j;
}

GestureLogRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("log record must be a JSON object");
  GestureLogRecord r;
  try {
    if (j.contains("target_key") && !j["target_key"].is_null()) {
      r.target_key = key_from_string(j["target_key"].get<std::string>());
    }
    if (j.contains("thumb") && !j["thumb"].is_null()) {
      r.thumb = thumb_from_string(j["thumb"].get<std::string>());
    }
    if (j.contains("stimulus_t") && !j["stimulus_t"].is_null()) {
      r.stimulus_t = j["stimulus_t"].get<double>();
    }
    if (j.contains("pointer_id") && !j["pointer_id"].is_null()) {
      r.pointer_id = j["pointer_id"].get<std::int64_t>();
      r.gesture.pointer_id = *r.pointer_id;
    }
    if (j.contains("phrase")) r.phrase = j["phrase"].get<std::string>();
    if (j.contains("samples")) {
      for (const auto& s : j["samples"]) {
        if (!s.is_array() || s.size() != 3) {
          throw ParseError("each sample must be [x_mm, y_mm, t_ms]");
        }
        r.gesture.samples.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  if (!r.gesture.samples.empty() || !r.phrase) validate(r.gesture);
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnownFields), std::end(kKnownFields), key) == std::end(kKnownFields)) {
      r.extra[key] = value;
    }
  }
  return r;
}

}  // namespace dusk
