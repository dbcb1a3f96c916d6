#include "dusk/service.hpp"

#include <cmath>

namespace dusk {

namespace {

double number(const nlohmann::json& m, const char* field) {
  if (!m.contains(field) || !m[field].is_number()) {
    throw Error(std::string("field '") + field + "' must be a number");
  }
  const double v = m[field].get<double>();
  if (!std::isfinite(v)) throw Error(std::string("field '") + field + "' must be finite");
  return v;
}

nlohmann::json event_json(const KeyEvent& e) {
  nlohmann::json j = {{"kind", to_string(e.kind)}, {"t", e.t}};
  if (!e.text.empty()) j["text"] = e.text;
  if (!e.original.empty()) j["original"] = e.original;
  return j;
}

nlohmann::json last_key(const std::vector<KeyEvent>& events) {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    switch (it->kind) {
      case KeyEventKind::Char: return it->text;
      case KeyEventKind::Space: return "space";
      case KeyEventKind::Backspace:
      case KeyEventKind::AutocorrectReverted: return "backspace";
      case KeyEventKind::Enter: return "enter";
      case KeyEventKind::SuggestAccepted: return "suggest";
      case KeyEventKind::AutocorrectApplied:
      case KeyEventKind::CursorFeedback: break;
    }
  }
  return nullptr;
}

}  // namespace

nlohmann::json error_message(std::string_view code, std::string_view text) {
  return {{"kind", "error"}, {"code", code}, {"message", text}};
}

ServiceSession::ServiceSession(std::shared_ptr<const DecoderModel> model, SessionOptions options,
                               double cursor_rate_hz)
    : model_(model), session_(std::move(model), options), cursor_interval_ms_(1000.0 / cursor_rate_hz) {}

nlohmann::json ServiceSession::hello() const {
  const auto& pad = model_->profile().pad;
  return {{"kind", "hello"},
          {"version", kProtocolVersion},
          {"pad", {{"width_mm", pad.width}, {"height_mm", pad.height}}},
          {"layout", to_json(model_->layout())},
          {"predictions", session_.options().predictions_enabled},
          {"cursor_rate_hz", 1000.0 / cursor_interval_ms_}};
}

std::vector<nlohmann::json> ServiceSession::handle_text(std::string_view frame) {
  nlohmann::json message;
  try {
    message = nlohmann::json::parse(frame);
  } catch (const nlohmann::json::parse_error& e) {
    return {error_message("malformed_json", e.what())};
  }
  return handle(message);
}

template <typename F>
std::vector<nlohmann::json> ServiceSession::guarded(F&& f) {
  try {
    return f();
  } catch (const ContactError& e) {
    return {error_message("protocol", e.what())};
  } catch (const DecodeError& e) {
    return {error_message("decode", e.what())};
  } catch (const Error& e) {
    return {error_message("bad_request", e.what())};
  } catch (const nlohmann::json::exception& e) {
    return {error_message("bad_request", e.what())};
  }
}

std::vector<nlohmann::json> ServiceSession::handle(const nlohmann::json& message) {
  return guarded([&] { return dispatch(message); });
}

std::vector<nlohmann::json> ServiceSession::handle_contact(const ContactEvent& event) {
  return guarded([&] { return contact(event); });
}

std::vector<nlohmann::json> ServiceSession::dispatch(const nlohmann::json& m) {
  if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string()) {
    throw Error("message must be an object with a string 'kind'");
  }
  const auto kind = m["kind"].get<std::string>();

  if (kind == "touch_down" || kind == "touch_move" || kind == "touch_up") {
    const double x = number(m, "x");
    const double y = number(m, "y");
    if (x < 0 || x > 1 || y < 0 || y > 1) throw Error("x and y must be normalized to [0, 1]");
    const auto& pad = model_->profile().pad;
    ContactEvent e;
    e.phase = kind == "touch_down" ? ContactPhase::Down
              : kind == "touch_move" ? ContactPhase::Move
                                     : ContactPhase::Up;
    e.pointer_id = m.value("id", std::int64_t{0});
    e.sample = {x * pad.width, y * pad.height, number(m, "t")};
    return contact(e);
  }
  if (kind == "start_phrase") {
    if (!m.contains("text") || !m["text"].is_string()) throw Error("start_phrase needs 'text'");
    PhraseTrace trace;
    trace.presented = m["text"].get<std::string>();
    GestureLogRecord marker;
    marker.phrase = trace.presented;
    if (m.contains("block")) {
      trace.block = m["block"].get<int>();
      marker.extra["block"] = *trace.block;
    }
    session_.reset_text();
    phrase_ = std::move(trace);
    log_.push_back(std::move(marker));
    return {state_message({})};
  }
  if (kind == "end_phrase") {
    if (!phrase_) throw ContactError("no phrase in progress");
    nlohmann::json metrics = to_json(phrase_metrics(*phrase_));
    metrics["kind"] = "metrics";
    GestureLogRecord marker;
    marker.phrase = phrase_->presented;
    marker.extra["event"] = "end_phrase";
    log_.push_back(std::move(marker));
    phrase_.reset();
    return {std::move(metrics)};
  }
  if (kind == "set_options") {
    if (m.contains("predictions")) session_.set_predictions_enabled(m["predictions"].get<bool>());
    return {state_message({})};
  }
  if (kind == "export_log") {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : log_) records.push_back(to_json(r));
    return {{{"kind", "log"}, {"records", std::move(records)}}};
  }
  throw Error("unknown message kind '" + kind + "'");
}

std::vector<nlohmann::json> ServiceSession::contact(const ContactEvent& e) {
  auto finished = contacts_.feed(e);
  if (finished) return on_gesture(*finished);
  const Gesture* partial = contacts_.find(e.pointer_id);
  if (e.phase == ContactPhase::Down) {
    last_cursor_t_[static_cast<int>(infer_thumb(*partial, model_->profile().pad))].reset();
  }
  if (auto cursor = live_cursor(*partial, e.sample.t)) return {std::move(*cursor)};
  return {};
}

std::optional<nlohmann::json> ServiceSession::live_cursor(const Gesture& partial, double t) {
  const Thumb thumb = infer_thumb(partial, model_->profile().pad);
  auto& last = last_cursor_t_[static_cast<int>(thumb)];
  if (last && t - *last < cursor_interval_ms_) return std::nullopt;
  last = t;
  const Vec2d p =
      apply_transfer(model_->profile().transfer_for(thumb), normalized_endpoint(partial));
  return nlohmann::json{
      {"kind", "cursor"}, {"thumb", to_string(thumb)}, {"x", p.x()}, {"y", p.y()}, {"t", t}};
}

std::vector<nlohmann::json> ServiceSession::on_gesture(const Gesture& g) {
  auto events = session_.feed_touch(g);
  const Thumb thumb = infer_thumb(g, model_->profile().pad);
  GestureLogRecord record;
  record.gesture = g;
  record.pointer_id = g.pointer_id;
  record.thumb = thumb;
  log_.push_back(std::move(record));
  if (phrase_) {
    phrase_->gestures.push_back(g);
    phrase_->thumbs.push_back(thumb);
    phrase_->events.push_back(events);
  }
  return {state_message(events)};
}

nlohmann::json ServiceSession::state_message(const std::vector<KeyEvent>& events) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : events) {
    if (e.kind != KeyEventKind::CursorFeedback) list.push_back(event_json(e));
  }
  return {{"kind", "state"},
          {"committed_text", session_.committed_text()},
          {"current_word", session_.current_word()},
          {"suggestions", session_.suggestions()},
          {"last_key", last_key(events)},
          {"events", std::move(list)},
          {"phrase", phrase_ ? nlohmann::json(phrase_->presented) : nlohmann::json(nullptr)}};
}

}  // namespace dusk
