#include "dusk/contact.hpp"

#include <string>

namespace dusk {

std::string_view to_string(ContactPhase p) {
  switch (p) {
    case ContactPhase::Down: return "down";
    case ContactPhase::Move: return "move";
    case ContactPhase::Up: return "up";
  }
  return "?";
}

const Gesture* GestureAssembler::find(std::int64_t pointer_id) const {
  auto it = active_.find(pointer_id);
  return it == active_.end() ? nullptr : &it->second;
}

std::optional<Gesture> GestureAssembler::feed(const ContactEvent& e) {
  const auto id = std::to_string(e.pointer_id);
  if (e.phase == ContactPhase::Down) {
    if (active_.contains(e.pointer_id)) throw ContactError("pointer " + id + " is already down");
    Gesture g;
    g.pointer_id = e.pointer_id;
    g.samples.push_back(e.sample);
    active_.emplace(e.pointer_id, std::move(g));
    return std::nullopt;
  }

  auto it = active_.find(e.pointer_id);
  if (it == active_.end()) {
    throw ContactError(std::string(to_string(e.phase)) + " for pointer " + id + " without a down");
  }
  if (e.sample.t < it->second.last().t) {
    throw ContactError("pointer " + id + ": time runs backwards");
  }
  auto& samples = it->second.samples;
  const bool repeat = samples.back().x == e.sample.x && samples.back().y == e.sample.y &&
                      samples.back().t == e.sample.t;
  if (!repeat) samples.push_back(e.sample);
  if (e.phase == ContactPhase::Move) return std::nullopt;

  Gesture done = std::move(it->second);
  active_.erase(it);
  return done;
}

}  // namespace dusk
