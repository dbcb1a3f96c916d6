#pragma once

// OSC 1.0 binary packets: messages with int32 / float32 / string / blob
// arguments and (nested) #bundle containers. Big-endian, 4-byte aligned.

#include "dusk/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dusk {

class OscError : public Error {
 public:
  OscError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

using OscBlob = std::vector<std::uint8_t>;
using OscArgument = std::variant<std::int32_t, float, std::string, OscBlob>;

struct OscMessage {
  std::string address;
  std::vector<OscArgument> args;

  /// ",i f s b" style tag string derived from the arguments.
  std::string type_tags() const;
  /// Floats compare by bit pattern.
  bool operator==(const OscMessage& other) const;
};

inline constexpr int kMaxBundleDepth = 8;

std::vector<std::uint8_t> encode_message(const OscMessage& m);
/// Bundle of already-encoded elements (messages or bundles).
std::vector<std::uint8_t> encode_bundle(std::span<const std::vector<std::uint8_t>> elements,
                                        std::uint64_t timetag = 1);
std::vector<std::uint8_t> encode_bundle(std::span<const OscMessage> messages,
                                        std::uint64_t timetag = 1);

/// Messages of a packet in wire order, bundles flattened. Throws OscError.
std::vector<OscMessage> parse_osc_packet(std::span<const std::uint8_t> bytes);

}  // namespace dusk
