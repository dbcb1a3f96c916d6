#include "dusk/recognizer.hpp"

#include <array>

namespace dusk {

namespace {

constexpr std::array<const char*, 8> kCompassNames{"E", "SE", "S", "SW",
                                                   "W", "NW", "N", "NE"};
// Declaration order of single strokes: clockwise from north.
constexpr std::array<int, 8> kDeclarationOrder{6, 7, 0, 1, 2, 3, 4, 5};

bool is_cardinal(int dir) { return dir % 2 == 0; }

TemplateFamily compound_family(int first, int turn) {
  const int magnitude = std::abs(turn);
  if (magnitude == 2) return TemplateFamily::LShape;
  if (magnitude == 3) return TemplateFamily::VShape;
  // Obtuse 45 degree turns: split by the orientation of the first leg.
  return is_cardinal(first) ? TemplateFamily::LShape : TemplateFamily::VShape;
}

}  // namespace

std::string_view to_string(TemplateFamily f) {
  switch (f) {
    case TemplateFamily::Single8: return "single8";
    case TemplateFamily::LShape: return "lshape";
    case TemplateFamily::VShape: return "vshape";
  }
  return "?";
}

TemplateFamily family_from_string(std::string_view s) {
  if (s == "single8") return TemplateFamily::Single8;
  if (s == "lshape") return TemplateFamily::LShape;
  if (s == "vshape") return TemplateFamily::VShape;
  throw ParseError("unknown template family '" + std::string(s) + "'");
}

ContactClass classify_contact(const Gesture& g, double threshold_mm) {
  return path_length(g) < threshold_mm ? ContactClass::Tap : ContactClass::Stroke;
}

Thumb infer_thumb(const Gesture& g, const PadSpec& pad) {
  return g.first().x < pad.width / 2 ? Thumb::Left : Thumb::Right;
}

CellId cell_at(const Vec2d& p, const PadSpec& pad) {
  auto index = [](double v, double extent) {
    const int i = static_cast<int>(std::floor(3.0 * v / extent));
    return std::clamp(i, 0, 2);
  };
  return {index(p.y(), pad.height), index(p.x(), pad.width)};
}

CellId recognize_tap(const Gesture& g, const PadSpec& pad, double threshold_mm) {
  if (classify_contact(g, threshold_mm) != ContactClass::Tap) {
    throw Error("recognize_tap called on a stroke");
  }
  return cell_at(g.first().position(), pad);
}

AngleSeq angle_sequence(std::span<const Vec2d> path, int n) {
  if (n < 2) throw Error("angle_sequence needs n >= 2");
  std::vector<Vec2d> pts;
  pts.reserve(path.size());
  for (const auto& p : path) {
    if (pts.empty() || p != pts.back()) pts.push_back(p);
  }
  if (pts.size() < 2) throw Error("angle_sequence: zero-length path");

  std::vector<double> cumulative(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (pts[i] - pts[i - 1]).norm();
  }
  const double total = cumulative.back();

  std::vector<Vec2d> resampled;
  resampled.reserve(static_cast<std::size_t>(n));
  std::size_t seg = 1;
  for (int k = 0; k < n; ++k) {
    if (k == n - 1) {
      resampled.push_back(pts.back());
      break;
    }
    const double s = total * k / (n - 1);
    while (seg + 1 < pts.size() && cumulative[seg] < s) ++seg;
    const double span = cumulative[seg] - cumulative[seg - 1];
    const double u = span > 0 ? (s - cumulative[seg - 1]) / span : 0.0;
    resampled.push_back(pts[seg - 1] + u * (pts[seg] - pts[seg - 1]));
  }

  AngleSeq angles(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    const Vec2d d = resampled[k + 1] - resampled[k];
    angles(k) = std::atan2(d.y(), d.x());
  }
  return angles;
}

AngleSeq angle_sequence(const Gesture& g, int n) {
  std::vector<Vec2d> path;
  path.reserve(g.samples.size());
  for (const auto& s : g.samples) path.push_back(s.position());
  return angle_sequence(path, n);
}

StrokeMatch recognize_stroke(const AngleSeq& angles,
                             std::span<const StrokeTemplate> templates) {
  if (templates.empty()) throw Error("recognize_stroke: empty template set");
  StrokeMatch best;
  best.deviation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const double d = dtw_deviation(angles, templates[i].angle_seq);
    if (d < best.deviation) best = {i, templates[i].id, d};
  }
  return best;
}

StrokeMatch recognize_stroke(const Gesture& g,
                             std::span<const StrokeTemplate> templates, int n) {
  return recognize_stroke(angle_sequence(g, n), templates);
}

Vec2d compass_heading(int dir) {
  const double a = ((dir % 8 + 8) % 8) * std::numbers::pi / 4.0;
  return {std::cos(a), std::sin(a)};
}

std::vector<Vec2d> canonical_polyline(const StrokeTemplate& tpl, double leg_mm) {
  std::vector<Vec2d> pts{Vec2d::Zero()};
  for (int dir : tpl.legs) pts.push_back(pts.back() + leg_mm * compass_heading(dir));
  return pts;
}

std::vector<StrokeTemplate> canonical_templates(int n) {
  std::vector<StrokeTemplate> singles, lshapes, vshapes;
  for (int dir : kDeclarationOrder) {
    singles.push_back({kCompassNames[dir], TemplateFamily::Single8, {dir}, {}});
  }
  for (int first : kDeclarationOrder) {
    for (int turn : {-3, -2, -1, 1, 2, 3}) {
      const int second = (first + turn + 8) % 8;
      StrokeTemplate tpl{std::string(kCompassNames[first]) + ">" + kCompassNames[second],
                         compound_family(first, turn),
                         {first, second},
                         {}};
      (tpl.family == TemplateFamily::LShape ? lshapes : vshapes).push_back(std::move(tpl));
    }
  }

  std::vector<StrokeTemplate> all;
  for (auto* group : {&singles, &lshapes, &vshapes}) {
    for (auto& tpl : *group) all.push_back(std::move(tpl));
  }
  for (auto& tpl : all) tpl.angle_seq = angle_sequence(canonical_polyline(tpl), n);
  return all;
}

nlohmann::json templates_to_json(std::span<const StrokeTemplate> templates) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& tpl : templates) {
    out.push_back({{"id", tpl.id},
                   {"family", to_string(tpl.family)},
                   {"legs", tpl.legs},
                   {"angles", std::vector<double>(tpl.angle_seq.begin(), tpl.angle_seq.end())}});
  }
  return out;
}

std::vector<StrokeTemplate> templates_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("template file must be a JSON array");
  std::vector<StrokeTemplate> out;
  for (const auto& item : j) {
    StrokeTemplate tpl;
    tpl.id = item.at("id").get<std::string>();
    tpl.family = family_from_string(item.at("family").get<std::string>());
    tpl.legs = item.value("legs", std::vector<int>{});
    const auto angles = item.at("angles").get<std::vector<double>>();
    if (angles.empty()) throw ParseError("template '" + tpl.id + "' has no angles");
    tpl.angle_seq = Eigen::Map<const AngleSeq>(angles.data(), static_cast<Eigen::Index>(angles.size()));
    out.push_back(std::move(tpl));
  }
  return out;
}

}  // namespace dusk
