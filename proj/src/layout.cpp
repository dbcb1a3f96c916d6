#include "dusk/layout.hpp"

#include <limits>
#include <set>

namespace dusk {

std::optional<KeyId> Layout::tap_function(CellId cell) const {
  if (auto it = tap_map.find(cell); it != tap_map.end()) return it->second;
  return std::nullopt;
}

Thumb Layout::thumb_for(KeyId k) const {
  auto it = thumb_map.find(k);
  if (it == thumb_map.end()) throw Error("no thumb assigned to key " + to_string(k));
  return it->second;
}

Layout default_layout() {
  Layout l;
  l.tap_map = {
      {{2, 0}, KeyId::Space},    {{2, 2}, KeyId::Backspace},
      {{1, 2}, KeyId::Enter},    {{0, 0}, KeyId::Suggest1},
      {{0, 2}, KeyId::Suggest2},
  };
  for (char c : std::string_view("qwertasdfgzxcvb")) l.thumb_map[key_from_char(c)] = Thumb::Left;
  for (char c : std::string_view("yuiophjklnm")) l.thumb_map[key_from_char(c)] = Thumb::Right;
  l.thumb_map[KeyId::Space] = Thumb::Left;
  return l;
}

void validate(const Layout& l) {
  if (l.rows.size() != l.row_offsets.size()) {
    throw Error("layout: rows and row_offsets differ in length");
  }
  std::set<char> seen;
  for (const auto& row : l.rows) {
    for (char c : row) {
      if (c < 'a' || c > 'z') throw Error(std::string("layout: bad key '") + c + "'");
      if (!seen.insert(c).second) throw Error(std::string("layout: duplicate key '") + c + "'");
    }
  }
  if (seen.size() != kLetterCount) throw Error("layout: every letter must appear once");
  if (!is_letter(l.start_left) || !is_letter(l.start_right)) {
    throw Error("layout: start keys must be letters");
  }
  if (l.tap_map.contains(CellId{1, 1})) throw Error("layout: center cell cannot carry a function");
  for (const auto& [cell, key] : l.tap_map) {
    if (cell.row < 0 || cell.row > 2 || cell.col < 0 || cell.col > 2) {
      throw Error("layout: tap cell out of range");
    }
    if (is_letter(key)) throw Error("layout: tap zones carry function keys only");
  }
  for (int i = 0; i < kLetterCount; ++i) {
    if (!l.thumb_map.contains(letter_key(i))) throw Error("layout: thumb_map misses a letter");
  }
  if (!l.thumb_map.contains(KeyId::Space)) throw Error("layout: thumb_map misses space");
}

Vec2d key_position(const Layout& l, KeyId k) {
  if (!is_letter(k)) throw Error("key_position: function key " + to_string(k));
  const char c = to_char(k);
  for (std::size_t r = 0; r < l.rows.size(); ++r) {
    if (auto col = l.rows[r].find(c); col != std::string::npos) {
      return {l.row_offsets[r] + static_cast<double>(col), static_cast<double>(r)};
    }
  }
  throw Error(std::string("key_position: letter not in layout: ") + c);
}

double mean_key_distance(const Layout& l, KeyId from, Thumb side) {
  const Vec2d origin = key_position(l, from);
  double sum = 0;
  int count = 0;
  for (const auto& [key, thumb] : l.thumb_map) {
    if (!is_letter(key) || thumb != side || key == from) continue;
    sum += (key_position(l, key) - origin).norm();
    ++count;
  }
  if (count == 0) return 0;
  return sum / count / l.key_radius;
}

KeyId nearest_letter(const Layout& l, const Vec2d& p) {
  KeyId best = KeyId::A;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kLetterCount; ++i) {
    const double d2 = (key_position(l, letter_key(i)) - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = letter_key(i);
    }
  }
  return best;
}

nlohmann::json to_json(const Layout& l) {
  nlohmann::json tap = nlohmann::json::array();
  for (const auto& [cell, key] : l.tap_map) {
    tap.push_back({{"row", cell.row}, {"col", cell.col}, {"key", to_string(key)}});
  }
  nlohmann::json thumbs = nlohmann::json::object();
  for (const auto& [key, thumb] : l.thumb_map) thumbs[to_string(key)] = to_string(thumb);
  return {{"rows", l.rows},
          {"row_offsets", l.row_offsets},
          {"key_radius", l.key_radius},
          {"start_left", to_string(l.start_left)},
          {"start_right", to_string(l.start_right)},
          {"tap_map", tap},
          {"thumb_map", thumbs}};
}

Layout layout_from_json(const nlohmann::json& j) {
  try {
    Layout l;
    l.rows = j.at("rows").get<std::vector<std::string>>();
    l.row_offsets = j.at("row_offsets").get<std::vector<double>>();
    l.key_radius = j.value("key_radius", 0.5);
    l.start_left = key_from_string(j.at("start_left").get<std::string>());
    l.start_right = key_from_string(j.at("start_right").get<std::string>());
    for (const auto& item : j.at("tap_map")) {
      l.tap_map[CellId{item.at("row").get<int>(), item.at("col").get<int>()}] =
          key_from_string(item.at("key").get<std::string>());
    }
    for (const auto& [key, thumb] : j.at("thumb_map").items()) {
      l.thumb_map[key_from_string(key)] = thumb_from_string(thumb.get<std::string>());
    }
    validate(l);
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("layout: ") + e.what());
  }
}

}  // namespace dusk
