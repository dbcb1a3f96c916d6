#pragma once

// QWERTY key geometry, start keys, thumb assignment and the tap-zone map.
// Key positions are in key units: one key width = 1 = two key radii.

#include "dusk/recognizer.hpp"
#include "dusk/types.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dusk {

struct Layout {
  std::vector<std::string> rows{"qwertyuiop", "asdfghjkl", "zxcvbnm"};
  std::vector<double> row_offsets{0.0, 0.5, 1.5};
  double key_radius = 0.5;
  KeyId start_left = KeyId::D;
  KeyId start_right = KeyId::K;
  std::map<CellId, KeyId> tap_map;
  std::map<KeyId, Thumb> thumb_map;

  KeyId start_key(Thumb t) const { return t == Thumb::Left ? start_left : start_right; }
  /// Function key bound to `cell`, if any. The center cell never has one.
  std::optional<KeyId> tap_function(CellId cell) const;
  Thumb thumb_for(KeyId k) const;
};

/// Default layout: staggered QWERTY, D/K start keys, touch-typing hand split,
/// Space bottom-left, Backspace bottom-right, Enter middle-right,
/// suggestions in the top corners.
Layout default_layout();

/// Throws Error unless every letter appears exactly once, start keys are
/// letters, the center cell is unmapped and thumb_map covers letters + Space.
void validate(const Layout& l);

/// Key center in key units; throws for function keys.
Vec2d key_position(const Layout& l, KeyId k);

/// Mean distance from `from` to every other letter assigned to `side`, in key
/// radii.
double mean_key_distance(const Layout& l, KeyId from, Thumb side);

/// Letter whose center is nearest to `p`; ties resolve to the earlier letter.
KeyId nearest_letter(const Layout& l, const Vec2d& p);

nlohmann::json to_json(const Layout& l);
Layout layout_from_json(const nlohmann::json& j);

}  // namespace dusk
