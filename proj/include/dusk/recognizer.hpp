#pragma once

// Gesture classification: tap/stroke split, thumb inference, 3x3 tap cells
// and DTW matching of resampled angle sequences against stroke templates.

#include "dusk/types.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace dusk {

inline constexpr double kDefaultTapThresholdMm = 10.0;
inline constexpr int kDefaultResampleCount = 10;

enum class ContactClass : std::uint8_t { Tap, Stroke };

struct CellId {
  int row = 0;  // 0 = top
  int col = 0;  // 0 = left

  bool is_center() const { return row == 1 && col == 1; }
  auto operator<=>(const CellId&) const = default;
};

using AngleSeq = Eigen::VectorXd;

enum class TemplateFamily : std::uint8_t { Single8, LShape, VShape };

std::string_view to_string(TemplateFamily f);
TemplateFamily family_from_string(std::string_view s);

struct StrokeTemplate {
  std::string id;
  TemplateFamily family = TemplateFamily::Single8;
  /// Compass headings of each leg, 0 = E, 1 = SE, ... 7 = NE (y down).
  std::vector<int> legs;
  AngleSeq angle_seq;
};

/// Tap iff path_length(g) < threshold_mm.
ContactClass classify_contact(const Gesture& g,
                              double threshold_mm = kDefaultTapThresholdMm);

/// Left iff the first sample lies strictly left of the pad midline.
Thumb infer_thumb(const Gesture& g, const PadSpec& pad);

/// Cell of an arbitrary pad position under the equal 3x3 partition. Points on
/// the right/bottom boundary belong to the last column/row.
CellId cell_at(const Vec2d& p, const PadSpec& pad);

/// Cell containing the first sample; throws if `g` is not a tap.
CellId recognize_tap(const Gesture& g, const PadSpec& pad,
                     double threshold_mm = kDefaultTapThresholdMm);

/// Resamples the path to `n` points equidistant in arc length and returns the
/// n-1 segment headings atan2(dy, dx). Throws for zero-length paths.
AngleSeq angle_sequence(std::span<const Vec2d> path, int n = kDefaultResampleCount);
AngleSeq angle_sequence(const Gesture& g, int n = kDefaultResampleCount);

/// Shortest distance between two headings on the circle, in [0, pi].
template <typename Scalar>
Scalar circular_distance(Scalar a, Scalar b) {
  using std::abs;
  using std::fmod;
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar d = fmod(abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

/// Unconstrained DTW with steps (1,0), (0,1), (1,1) and circular angular cost.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dtw_deviation(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = a.size();
  const Eigen::Index m = b.size();
  if (n == 0 || m == 0) throw Error("dtw_deviation needs nonempty sequences");

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> acc(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Scalar cost = circular_distance<Scalar>(a(i), b(j));
      if (i == 0 && j == 0) {
        acc(i, j) = cost;
      } else if (i == 0) {
        acc(i, j) = cost + acc(i, j - 1);
      } else if (j == 0) {
        acc(i, j) = cost + acc(i - 1, j);
      } else {
        acc(i, j) = cost + std::min({acc(i - 1, j), acc(i, j - 1), acc(i - 1, j - 1)});
      }
    }
  }
  return acc(n - 1, m - 1);
}

struct StrokeMatch {
  std::size_t index = 0;
  std::string id;
  double deviation = 0;
};

/// Template with the lowest deviation; ties go to the earliest template.
StrokeMatch recognize_stroke(const AngleSeq& angles,
                             std::span<const StrokeTemplate> templates);
StrokeMatch recognize_stroke(const Gesture& g,
                             std::span<const StrokeTemplate> templates,
                             int n = kDefaultResampleCount);

/// Unit heading of compass direction `dir` (0 = E, clockwise on screen).
Vec2d compass_heading(int dir);

/// Vertices of the canonical polyline, starting at the origin.
std::vector<Vec2d> canonical_polyline(const StrokeTemplate& tpl,
                                      double leg_mm = 20.0);

/// The 56 stroke templates: 8 single strokes, 24 L-shapes, 24 V-shapes.
std::vector<StrokeTemplate> canonical_templates(int n = kDefaultResampleCount);

nlohmann::json templates_to_json(std::span<const StrokeTemplate> templates);
std::vector<StrokeTemplate> templates_from_json(const nlohmann::json& j);

}  // namespace dusk
