#include "dusk/tuio.hpp"

#include <algorithm>
#include <unordered_set>

namespace dusk {

namespace {

constexpr const char* kCursorAddress = "/tuio/2Dcur";

template <typename T>
const T& arg(const OscMessage& m, std::size_t i) {
  if (i >= m.args.size()) throw Error("2Dcur message has too few arguments");
  const auto* v = std::get_if<T>(&m.args[i]);
  if (!v) throw Error("2Dcur argument " + std::to_string(i) + " has the wrong type");
  return *v;
}

}  // namespace

TuioFrames tuio_frames(std::span<const OscMessage> messages) {
  TuioFrames out;
  TuioCursorFrame current;
  std::size_t pending = 0;
  for (const auto& m : messages) {
    if (m.address != kCursorAddress) {
      ++out.ignored_messages;
      continue;
    }
    const auto& command = arg<std::string>(m, 0);
    ++pending;
    if (command == "source") {
      current.source = arg<std::string>(m, 1);
    } else if (command == "alive") {
      current.alive.clear();
      for (std::size_t i = 1; i < m.args.size(); ++i) current.alive.push_back(arg<std::int32_t>(m, i));
    } else if (command == "set") {
      if (m.args.size() != 7) throw Error("2Dcur set needs 6 values");
      current.set.push_back({arg<std::int32_t>(m, 1), arg<float>(m, 2), arg<float>(m, 3),
                             arg<float>(m, 4), arg<float>(m, 5), arg<float>(m, 6)});
    } else if (command == "fseq") {
      current.fseq = arg<std::int32_t>(m, 1);
      out.frames.push_back(std::move(current));
      current = {};
      pending = 0;
    } else {
      --pending;
      ++out.ignored_messages;
    }
  }
  out.ignored_messages += pending;
  return out;
}

std::vector<OscMessage> tuio_messages(const TuioCursorFrame& frame) {
  std::vector<OscMessage> out;
  if (frame.source) out.push_back({kCursorAddress, {std::string("source"), *frame.source}});
  OscMessage alive{kCursorAddress, {std::string("alive")}};
  for (auto id : frame.alive) alive.args.emplace_back(id);
  out.push_back(std::move(alive));
  for (const auto& c : frame.set) {
    out.push_back({kCursorAddress, {std::string("set"), c.session_id, c.x, c.y, c.vx, c.vy, c.accel}});
  }
  out.push_back({kCursorAddress, {std::string("fseq"), frame.fseq}});
  return out;
}

std::vector<ContactEvent> TuioTracker::feed(const TuioCursorFrame& frame, double arrival_ms) {
  const bool redundant = frame.fseq == -1;
  if (!redundant && last_fseq_ && frame.fseq <= *last_fseq_) {
    ++stats_.duplicate_frames;
    return {};
  }
  const std::unordered_set<std::int32_t> alive(frame.alive.begin(), frame.alive.end());
  if (!redundant) {
    for (const auto& c : frame.set) {
      if (!alive.contains(c.session_id)) {
        ++stats_.rejected_frames;
        return {};
      }
    }
    last_fseq_ = frame.fseq;
  }
  ++stats_.frames;

  std::vector<ContactEvent> out;
  // Contacts that left the alive list lift at their last position.
  for (auto it = contacts_.begin(); it != contacts_.end();) {
    if (alive.contains(it->first)) {
      ++it;
      continue;
    }
    if (it->second.down) {
      TouchSample s = it->second.last;
      s.t = std::max(s.t, arrival_ms);
      out.push_back({ContactPhase::Up, it->first, s});
    }
    it = contacts_.erase(it);
  }
  for (auto id : frame.alive) contacts_.try_emplace(id);
  if (redundant) return out;

  for (const auto& c : frame.set) {
    auto& contact = contacts_.at(c.session_id);
    const TouchSample s{static_cast<double>(c.x) * pad_.width,
                        static_cast<double>(c.y) * pad_.height, arrival_ms};
    out.push_back({contact.down ? ContactPhase::Move : ContactPhase::Down, c.session_id, s});
    contact.down = true;
    contact.last = s;
  }
  return out;
}

std::vector<ContactEvent> TuioIngest::datagram(std::span<const std::uint8_t> bytes,
                                               double arrival_ms) {
  ++datagrams_;
  TuioFrames frames;
  try {
    const auto messages = parse_osc_packet(bytes);
    frames = tuio_frames(messages);
  } catch (const Error&) {
    ++malformed_;
    return {};
  }
  ignored_ += frames.ignored_messages;
  std::vector<ContactEvent> out;
  for (const auto& f : frames.frames) {
    auto events = tracker_.feed(f, arrival_ms);
    out.insert(out.end(), events.begin(), events.end());
  }
  return out;
}

TuioIngestStats TuioIngest::stats() const {
  return {datagrams_, malformed_, ignored_, tracker_.stats()};
}

}  // namespace dusk
