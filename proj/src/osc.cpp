#include "dusk/osc.hpp"

#include <bit>
#include <cstring>

namespace dusk {

namespace {

constexpr char kBundleTag[8] = {'#', 'b', 'u', 'n', 'd', 'l', 'e', '\0'};

std::size_t padded(std::size_t n) { return (n + 3) & ~std::size_t{3}; }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  if (s.find('\0') != std::string::npos) throw Error("OSC strings cannot contain NUL");
  out.insert(out.end(), s.begin(), s.end());
  out.resize(out.size() + padded(s.size() + 1) - s.size(), 0);
}

void put_blob(std::vector<std::uint8_t>& out, const OscBlob& b) {
  put_u32(out, static_cast<std::uint32_t>(b.size()));
  out.insert(out.end(), b.begin(), b.end());
  out.resize(out.size() + padded(b.size()) - b.size(), 0);
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t base) : bytes_(bytes), base_(base) {}

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t offset() const { return base_ + pos_; }

  std::uint32_t u32() {
    need(4, "truncated 32-bit value");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }

  std::string string() {
    const std::size_t start = pos_;
    const auto* begin = bytes_.data() + pos_;
    const auto* nul = static_cast<const std::uint8_t*>(
        std::memchr(begin, 0, bytes_.size() - pos_));
    if (!nul) throw OscError("unterminated string", offset());
    const auto length = static_cast<std::size_t>(nul - begin);
    const std::size_t total = padded(length + 1);
    need(total, "truncated string padding");
    for (std::size_t i = length; i < total; ++i) {
      if (bytes_[pos_ + i] != 0) throw OscError("nonzero string padding", base_ + start + i);
    }
    pos_ += total;
    return std::string(reinterpret_cast<const char*>(begin), length);
  }

  OscBlob blob() {
    const std::size_t size = u32();
    need(padded(size), "truncated blob");
    OscBlob b(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
              bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + size));
    for (std::size_t i = size; i < padded(size); ++i) {
      if (bytes_[pos_ + i] != 0) throw OscError("nonzero blob padding", offset() + i);
    }
    pos_ += padded(size);
    return b;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    need(n, "truncated bundle element");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw OscError(what, offset());
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

OscMessage parse_message(std::span<const std::uint8_t> bytes, std::size_t base) {
  Reader r(bytes, base);
  OscMessage m;
  if (bytes.empty() || bytes[0] != '/') throw OscError("address must start with '/'", base);
  m.address = r.string();
  if (r.done()) return m;  // OSC 1.0 tolerates a missing tag string
  const std::size_t tag_offset = r.offset();
  const std::string tags = r.string();
  if (tags.empty() || tags[0] != ',') throw OscError("type tags must start with ','", tag_offset);
  for (std::size_t i = 1; i < tags.size(); ++i) {
    switch (tags[i]) {
      case 'i':
        m.args.emplace_back(static_cast<std::int32_t>(r.u32()));
        break;
      case 'f':
        m.args.emplace_back(std::bit_cast<float>(r.u32()));
        break;
      case 's':
        m.args.emplace_back(r.string());
        break;
      case 'b':
        m.args.emplace_back(r.blob());
        break;
      default:
        throw OscError(std::string("unknown type tag '") + tags[i] + "'", tag_offset + i);
    }
  }
  if (!r.done()) throw OscError("trailing bytes after arguments", r.offset());
  return m;
}

void parse_packet(std::span<const std::uint8_t> bytes, std::size_t base, int depth,
                  std::vector<OscMessage>& out) {
  if (bytes.size() % 4 != 0) throw OscError("packet size is not a multiple of 4", base);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kBundleTag, 8) == 0) {
    if (depth >= kMaxBundleDepth) throw OscError("bundles nested too deeply", base);
    Reader r(bytes.subspan(8), base + 8);
    r.u32();  // time tag, seconds
    r.u32();  // time tag, fraction
    while (!r.done()) {
      const std::size_t size_offset = r.offset();
      const std::size_t size = r.u32();
      if (size == 0 || size % 4 != 0) throw OscError("bad bundle element size", size_offset);
      const std::size_t element_offset = r.offset();
      parse_packet(r.take(size), element_offset, depth + 1, out);
    }
    return;
  }
  out.push_back(parse_message(bytes, base));
}

}  // namespace

std::string OscMessage::type_tags() const {
  std::string tags = ",";
  for (const auto& a : args) tags += "ifsb"[a.index()];
  return tags;
}

bool OscMessage::operator==(const OscMessage& other) const {
  if (address != other.address || args.size() != other.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    const auto& b = other.args[i];
    if (a.index() != b.index()) return false;
    if (const auto* f = std::get_if<float>(&a)) {
      if (std::bit_cast<std::uint32_t>(*f) != std::bit_cast<std::uint32_t>(std::get<float>(b))) {
        return false;
      }
    } else if (a != b) {
      return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> encode_message(const OscMessage& m) {
  if (m.address.empty() || m.address[0] != '/') throw Error("OSC address must start with '/'");
  std::vector<std::uint8_t> out;
  put_string(out, m.address);
  put_string(out, m.type_tags());
  for (const auto& a : m.args) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::int32_t>) {
            put_u32(out, static_cast<std::uint32_t>(v));
          } else if constexpr (std::is_same_v<T, float>) {
            put_u32(out, std::bit_cast<std::uint32_t>(v));
          } else if constexpr (std::is_same_v<T, std::string>) {
            put_string(out, v);
          } else {
            put_blob(out, v);
          }
        },
        a);
  }
  return out;
}

std::vector<std::uint8_t> encode_bundle(std::span<const std::vector<std::uint8_t>> elements,
                                        std::uint64_t timetag) {
  std::vector<std::uint8_t> out(std::begin(kBundleTag), std::end(kBundleTag));
  put_u32(out, static_cast<std::uint32_t>(timetag >> 32));
  put_u32(out, static_cast<std::uint32_t>(timetag));
  for (const auto& e : elements) {
    put_u32(out, static_cast<std::uint32_t>(e.size()));
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

std::vector<std::uint8_t> encode_bundle(std::span<const OscMessage> messages,
                                        std::uint64_t timetag) {
  std::vector<std::vector<std::uint8_t>> elements;
  elements.reserve(messages.size());
  for (const auto& m : messages) elements.push_back(encode_message(m));
  return encode_bundle(elements, timetag);
}

std::vector<OscMessage> parse_osc_packet(std::span<const std::uint8_t> bytes) {
  std::vector<OscMessage> out;
  parse_packet(bytes, 0, 0, out);
  return out;
}

}  // namespace dusk
