#pragma once

// Per-connection session logic behind `dusk serve`: JSON client messages in,
// JSON server messages out. Transport-free so it can be driven directly by
// tests and transcripts.

#include "dusk/contact.hpp"
#include "dusk/decoder.hpp"
#include "dusk/log_record.hpp"
#include "dusk/metrics.hpp"

#include <json.hpp>

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace dusk {

inline constexpr int kProtocolVersion = 1;
inline constexpr double kCursorRateHz = 60.0;

class ServiceSession {
 public:
  explicit ServiceSession(std::shared_ptr<const DecoderModel> model,
                          SessionOptions options = {}, double cursor_rate_hz = kCursorRateHz);

  /// First message on a new connection: protocol version, pad and layout.
  nlohmann::json hello() const;

  /// One text frame. Malformed input yields an error message; the session
  /// is left as it was.
  std::vector<nlohmann::json> handle_text(std::string_view frame);
  std::vector<nlohmann::json> handle(const nlohmann::json& message);
  /// Contact already in pad millimeters (the TUIO bridge). Errors are
  /// reported as messages, like handle().
  std::vector<nlohmann::json> handle_contact(const ContactEvent& event);

  /// Phrase markers and decoded gestures, replayable with `dusk replay`.
  const std::vector<GestureLogRecord>& log() const { return log_; }
  const Session& session() const { return session_; }

 private:
  template <typename F>
  std::vector<nlohmann::json> guarded(F&& f);
  std::vector<nlohmann::json> dispatch(const nlohmann::json& message);
  std::vector<nlohmann::json> contact(const ContactEvent& e);
  std::vector<nlohmann::json> on_gesture(const Gesture& g);
  std::optional<nlohmann::json> live_cursor(const Gesture& partial, double t);
  nlohmann::json state_message(const std::vector<KeyEvent>& events) const;

  std::shared_ptr<const DecoderModel> model_;
  Session session_;
  GestureAssembler contacts_;
  double cursor_interval_ms_;
  std::array<std::optional<double>, 2> last_cursor_t_;
  std::vector<GestureLogRecord> log_;
  std::optional<PhraseTrace> phrase_;
};

nlohmann::json error_message(std::string_view code, std::string_view text);

}  // namespace dusk
