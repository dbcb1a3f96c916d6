#include "dusk/types.hpp"

#include <charconv>
#include <cmath>

namespace dusk {

void validate(const Gesture& g) {
  if (g.samples.empty()) throw ParseError("gesture has no samples");
  for (std::size_t i = 1; i < g.samples.size(); ++i) {
    if (g.samples[i].t < g.samples[i - 1].t) {
      throw ParseError("gesture timestamps decrease at sample " +
                       std::to_string(i));
    }
  }
}

PadSpec parse_pad(std::string_view text) {
  const auto sep = text.find_first_of("xX");
  if (sep == std::string_view::npos) {
    throw ParseError("pad size must look like WxH, got '" + std::string(text) + "'");
  }
  auto number = [&](std::string_view part) {
    double v = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      throw ParseError("bad pad dimension '" + std::string(part) + "'");
    }
    return v;
  };
  PadSpec pad{number(text.substr(0, sep)), number(text.substr(sep + 1))};
  if (!pad.valid()) throw ParseError("pad must be landscape with positive size");
  return pad;
}

std::string_view to_string(Thumb t) {
  return t == Thumb::Left ? "left" : "right";
}

Thumb thumb_from_string(std::string_view s) {
  if (s == "left") return Thumb::Left;
  if (s == "right") return Thumb::Right;
  throw ParseError("unknown thumb '" + std::string(s) + "'");
}

KeyId key_from_char(char c) {
  if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  if (c < 'a' || c > 'z') {
    throw ParseError(std::string("not a letter: '") + c + "'");
  }
  return letter_key(c - 'a');
}

char to_char(KeyId k) {
  if (!is_letter(k)) throw Error("function key has no character: " + to_string(k));
  return static_cast<char>('a' + letter_index(k));
}

std::string to_string(KeyId k) {
  if (is_letter(k)) return std::string(1, static_cast<char>('a' + letter_index(k)));
  switch (k) {
    case KeyId::Space: return "space";
    case KeyId::Backspace: return "backspace";
    case KeyId::Enter: return "enter";
    case KeyId::Suggest1: return "suggest1";
    case KeyId::Suggest2: return "suggest2";
    default: break;
  }
  return "?";
}

KeyId key_from_string(std::string_view s) {
  if (s.size() == 1) return key_from_char(s[0]);
  if (s == "space") return KeyId::Space;
  if (s == "backspace") return KeyId::Backspace;
  if (s == "enter") return KeyId::Enter;
  if (s == "suggest1") return KeyId::Suggest1;
  if (s == "suggest2") return KeyId::Suggest2;
  throw ParseError("unknown key '" + std::string(s) + "'");
}

NormalizedEndpoint normalized_endpoint(const Gesture& g) {
  return g.last().position() - g.first().position();
}

double path_length(const Gesture& g) {
  double total = 0;
  for (std::size_t i = 1; i < g.samples.size(); ++i) {
    total += (g.samples[i].position() - g.samples[i - 1].position()).norm();
  }
  return total;
}

bool is_lowercase_word(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

}  // namespace dusk
