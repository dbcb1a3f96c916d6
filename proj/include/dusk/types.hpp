#pragma once

// Shared domain types. Every coordinate in the library follows the same
// convention: x grows to the right, y grows downward (screen convention).
// Touchpad positions are in millimeters, keyboard positions in key units.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dusk {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

using Vec2d = Vec2<double>;
using Mat2d = Mat2<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or message. `line` is 1-based when known, 0 otherwise.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct TouchSample {
  double x = 0;  // mm from pad left edge
  double y = 0;  // mm from pad top edge
  double t = 0;  // ms since session epoch

  Vec2d position() const { return {x, y}; }
  bool operator==(const TouchSample&) const = default;
};

/// One contiguous contact, touch-down to touch-up.
struct Gesture {
  std::vector<TouchSample> samples;
  std::int64_t pointer_id = 0;

  const TouchSample& first() const { return samples.front(); }
  const TouchSample& last() const { return samples.back(); }
  double down_time() const { return samples.front().t; }
  double up_time() const { return samples.back().t; }
  double duration() const { return up_time() - down_time(); }

  bool operator==(const Gesture&) const = default;
};

/// Throws ParseError if `g` is empty or its timestamps decrease.
void validate(const Gesture& g);

struct PadSpec {
  // Approximate active area of a 5.9-inch phone held in landscape.
  double width = 134.0;
  double height = 63.0;

  bool valid() const { return width > height && height > 0; }
  bool contains(const Vec2d& p) const {
    return p.x() >= 0 && p.x() <= width && p.y() >= 0 && p.y() <= height;
  }
  Vec2d clamp(const Vec2d& p) const {
    return {std::clamp(p.x(), 0.0, width), std::clamp(p.y(), 0.0, height)};
  }
  bool operator==(const PadSpec&) const = default;
};

/// Parses "WxH" (millimeters), e.g. "134x63".
PadSpec parse_pad(std::string_view text);

enum class Thumb : std::uint8_t { Left, Right };

inline constexpr std::array<Thumb, 2> kThumbs{Thumb::Left, Thumb::Right};

inline Thumb other(Thumb t) {
  return t == Thumb::Left ? Thumb::Right : Thumb::Left;
}
std::string_view to_string(Thumb t);
Thumb thumb_from_string(std::string_view s);

// Letters occupy 0..25 in alphabetical order so that ordering by KeyId is
// lexicographic ordering by letter.
enum class KeyId : std::uint8_t {
  A, B, C, D, E, F, G, H, I, J, K, L, M,
  N, O, P, Q, R, S, T, U, V, W, X, Y, Z,
  Space, Backspace, Enter, Suggest1, Suggest2
};

inline constexpr int kLetterCount = 26;

inline bool is_letter(KeyId k) { return static_cast<int>(k) < kLetterCount; }
inline KeyId letter_key(int index) { return static_cast<KeyId>(index); }
inline int letter_index(KeyId k) { return static_cast<int>(k); }

/// 'a'..'z' (either case) to its key; throws for anything else.
KeyId key_from_char(char c);
/// Lowercase letter for a letter key; throws for function keys.
char to_char(KeyId k);

/// "a".."z", "space", "backspace", "enter", "suggest1", "suggest2".
std::string to_string(KeyId k);
KeyId key_from_string(std::string_view s);

/// Last sample minus first sample.
using NormalizedEndpoint = Vec2d;

NormalizedEndpoint normalized_endpoint(const Gesture& g);

/// Sum of distances between consecutive samples.
double path_length(const Gesture& g);

/// True when `s` is nonempty and made only of 'a'..'z'.
bool is_lowercase_word(std::string_view s);

}  // namespace dusk
