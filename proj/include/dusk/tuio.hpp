#pragma once

// TUIO 1.1 /tuio/2Dcur frames over OSC, and the tracker that turns the
// alive/set/fseq state stream into per-contact down/move/up events in pad
// millimeters.

#include "dusk/contact.hpp"
#include "dusk/osc.hpp"
#include "dusk/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dusk {

inline constexpr std::uint16_t kDefaultTuioPort = 3333;

struct TuioCursor {
  std::int32_t session_id = 0;
  float x = 0, y = 0;  // normalized 0..1
  float vx = 0, vy = 0;
  float accel = 0;

  bool operator==(const TuioCursor&) const = default;
};

struct TuioCursorFrame {
  std::optional<std::string> source;
  std::vector<std::int32_t> alive;
  std::vector<TuioCursor> set;
  std::int32_t fseq = -1;

  bool operator==(const TuioCursorFrame&) const = default;
};

struct TuioFrames {
  std::vector<TuioCursorFrame> frames;
  /// Messages of other profiles (2Dobj, 2Dblb, ...) or unterminated frames.
  std::size_t ignored_messages = 0;
};

/// Groups /tuio/2Dcur messages into frames, each closed by its fseq message.
/// Throws Error on malformed 2Dcur arguments.
TuioFrames tuio_frames(std::span<const OscMessage> messages);

/// Messages for one frame: optional source, alive, one set per cursor, fseq.
std::vector<OscMessage> tuio_messages(const TuioCursorFrame& frame);

struct TuioTrackerStats {
  std::size_t frames = 0;
  std::size_t duplicate_frames = 0;
  std::size_t rejected_frames = 0;

  bool operator==(const TuioTrackerStats&) const = default;
};

class TuioTracker {
 public:
  explicit TuioTracker(PadSpec pad = {}) : pad_(pad) {}

  /// Events caused by one frame, stamped with `arrival_ms`. Frames whose fseq
  /// is not newer than the last accepted one are dropped, as are frames that
  /// set a cursor missing from their alive list. fseq -1 frames only
  /// reconcile the alive list.
  std::vector<ContactEvent> feed(const TuioCursorFrame& frame, double arrival_ms);

  const TuioTrackerStats& stats() const { return stats_; }
  const PadSpec& pad() const { return pad_; }

 private:
  struct Contact {
    bool down = false;  // false until the first set gives it a position
    TouchSample last;
  };

  PadSpec pad_;
  std::optional<std::int32_t> last_fseq_;
  std::map<std::int32_t, Contact> contacts_;
  TuioTrackerStats stats_;
};

struct TuioIngestStats {
  std::size_t datagrams = 0;
  std::size_t malformed = 0;
  std::size_t ignored_messages = 0;
  TuioTrackerStats tracker;
};

/// Datagram -> OSC -> frames -> contact events. Malformed datagrams are
/// counted and produce no events.
class TuioIngest {
 public:
  explicit TuioIngest(PadSpec pad = {}) : tracker_(pad) {}

  std::vector<ContactEvent> datagram(std::span<const std::uint8_t> bytes, double arrival_ms);
  TuioIngestStats stats() const;

 private:
  TuioTracker tracker_;
  std::size_t datagrams_ = 0;
  std::size_t malformed_ = 0;
  std::size_t ignored_ = 0;
};

}  // namespace dusk
