#pragma once

// Live contact events (down, move*, up per pointer) and their assembly into
// completed gestures.

#include "dusk/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

namespace dusk {

class ContactError : public Error {
 public:
  using Error::Error;
};

enum class ContactPhase : std::uint8_t { Down, Move, Up };

std::string_view to_string(ContactPhase p);

struct ContactEvent {
  ContactPhase phase = ContactPhase::Down;
  std::int64_t pointer_id = 0;
  TouchSample sample;

  bool operator==(const ContactEvent&) const = default;
};

class GestureAssembler {
 public:
  /// Returns the finished gesture on Up. Throws ContactError on a Down for an
  /// active pointer or a Move/Up for an unknown one, and when time runs
  /// backwards within a contact; the assembler is unchanged in that case.
  std::optional<Gesture> feed(const ContactEvent& e);

  const std::map<std::int64_t, Gesture>& active() const { return active_; }
  const Gesture* find(std::int64_t pointer_id) const;
  void clear() { active_.clear(); }

 private:
  std::map<std::int64_t, Gesture> active_;
};

}  // namespace dusk
