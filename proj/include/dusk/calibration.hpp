#pragma once

// Everything fitted from gesture logs: per-key endpoint Gaussians with 2-SD
// outlier rejection, the per-thumb affine transfer function from touchpad
// displacement to keyboard position, the synthetic default profile, and the
// per-key selection times used by the expert model.

#include "dusk/layout.hpp"
#include "dusk/log_record.hpp"
#include "dusk/types.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dusk {

class FitError : public Error {
 public:
  using Error::Error;
};

struct KeyEndpointModel {
  KeyId key = KeyId::A;
  Thumb thumb = Thumb::Left;
  Vec2d mean = Vec2d::Zero();  // mm
  Mat2d cov = Mat2d::Identity();  // mm^2
  std::size_t sample_count = 0;
};

/// Affine map from a normalized endpoint (mm) to keyboard coordinates (key
/// units). Row 0 holds (a_x, b_x, c_x), row 1 holds (a_y, b_y, c_y).
struct TransferFn {
  Thumb thumb = Thumb::Left;
  Eigen::Matrix<double, 2, 3> coefficients = Eigen::Matrix<double, 2, 3>::Zero();

  double a_x() const { return coefficients(0, 0); }
  double b_x() const { return coefficients(0, 1); }
  double c_x() const { return coefficients(0, 2); }
  double a_y() const { return coefficients(1, 0); }
  double b_y() const { return coefficients(1, 1); }
  double c_y() const { return coefficients(1, 2); }

  /// Keyboard position reached by a zero-length stroke.
  Vec2d origin() const { return coefficients.col(2); }
};

template <typename Derived>
Vec2<typename Derived::Scalar> apply_transfer(const TransferFn& tf,
                                              const Eigen::MatrixBase<Derived>& endpoint) {
  using Scalar = typename Derived::Scalar;
  return tf.coefficients.template leftCols<2>().template cast<Scalar>() * endpoint +
         tf.coefficients.col(2).template cast<Scalar>();
}

struct CalibrationProfile {
  PadSpec pad;
  double tap_threshold_mm = 10.0;
  std::array<std::array<std::optional<KeyEndpointModel>, kLetterCount>, 2> models{};
  std::array<TransferFn, 2> transfer{TransferFn{Thumb::Left, {}}, TransferFn{Thumb::Right, {}}};

  const KeyEndpointModel* find(KeyId key, Thumb thumb) const;
  void set(const KeyEndpointModel& m);
  const TransferFn& transfer_for(Thumb t) const { return transfer[static_cast<int>(t)]; }
  std::size_t model_count() const;
};

inline constexpr int kProfileSchemaVersion = 1;

/// Throws Error if a letter has no model for either thumb.
void validate(const CalibrationProfile& p);

/// Keys are emitted sorted; the dump is byte-stable for a given profile.
nlohmann::json to_json(const CalibrationProfile& p);
CalibrationProfile profile_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Endpoint statistics

struct EndpointStatsOptions {
  double sd_multiplier = 2.0;
  double regularization_mm2 = 0.01;
  std::size_t min_samples = 3;
};

/// Indices of points within `sd_multiplier` * SD of their mean, where
/// SD = sqrt(trace(sample covariance) / 2). One pass, no iteration.
std::vector<std::size_t> filter_outliers(std::span<const Vec2d> points,
                                         double sd_multiplier = 2.0);

/// Sample mean and unbiased covariance (zero covariance for a single point).
std::pair<Vec2d, Mat2d> mean_and_covariance(std::span<const Vec2d> points);

struct OmittedGroup {
  KeyId key;
  Thumb thumb;
  std::size_t total;
  std::size_t survivors;
};

struct EndpointStats {
  std::vector<KeyEndpointModel> models;
  std::vector<OmittedGroup> omitted;
  /// Indices (into the input log) of records kept by the outlier filter.
  std::vector<std::size_t> survivors;
  std::size_t considered = 0;

  double retention() const {
    return considered ? static_cast<double>(survivors.size()) / considered : 0.0;
  }
};

/// Groups records with a target key by (key, thumb) and fits one Gaussian per
/// group. The thumb is inferred from the start position when absent.
EndpointStats endpoint_stats(std::span<const GestureLogRecord> log, const PadSpec& pad,
                             const EndpointStatsOptions& options = {});

// ---------------------------------------------------------------------------
// Transfer function

/// Least-squares affine map with targets ~= A * input + c, returned as [A | c].
/// Throws FitError when the inputs do not span the plane.
Eigen::Matrix<double, 2, 3> fit_affine(std::span<const Vec2d> inputs,
                                       std::span<const Vec2d> targets);

/// Ordinary least squares of target key positions on normalized endpoints,
/// independently per thumb. Needs at least 6 records per thumb and a design
/// matrix of full column rank.
std::array<TransferFn, 2> fit_transfer(std::span<const GestureLogRecord> log,
                                       const Layout& layout, const PadSpec& pad);

struct FitReport {
  CalibrationProfile profile;
  EndpointStats stats;
};

/// endpoint_stats followed by fit_transfer on the surviving records.
FitReport fit_profile(std::span<const GestureLogRecord> log, const Layout& layout,
                      const PadSpec& pad, const EndpointStatsOptions& options = {});

inline constexpr double kDefaultSpreadMm = 3.0;
inline constexpr double kDefaultMmPerKey = 12.0;

/// Analytic profile: mean endpoint of key k for a thumb is
/// mm_per_key * (pos(k) - pos(start key)), covariance spread^2 * I, and the
/// transfer function inverts that map exactly.
CalibrationProfile synth_profile(const Layout& layout, const PadSpec& pad = {},
                                 double spread_mm = kDefaultSpreadMm,
                                 double mm_per_key = kDefaultMmPerKey);

// ---------------------------------------------------------------------------
// Timing

inline constexpr double kTapInPlaceMs = 127.0;
inline constexpr double kVisualReactionMs = 230.0;

class TimingTable {
 public:
  void set(KeyId key, Thumb thumb, double ms) { entries_[{key, thumb}] = ms; }
  std::optional<double> find(KeyId key, Thumb thumb) const;
  /// Throws Error when missing.
  double at(KeyId key, Thumb thumb) const;
  const std::map<std::pair<KeyId, Thumb>, double>& entries() const { return entries_; }
  /// Keys (letters + space) without an entry for the thumb `layout` assigns.
  std::vector<KeyId> missing(const Layout& layout) const;

  bool operator==(const TimingTable&) const = default;

 private:
  std::map<std::pair<KeyId, Thumb>, double> entries_;
};

struct TimingDerivation {
  TimingTable table;
  std::vector<std::string> warnings;
};

/// Stroke-selected keys: median(touch-down -> touch-up) + 127 ms.
/// Tap-selected keys: median(stimulus -> touch-up) - 230 ms, floored at 1 ms.
TimingDerivation derive_timing_table(std::span<const GestureLogRecord> log,
                                     const PadSpec& pad,
                                     double tap_threshold_mm = 10.0);

/// CSV with header `key,thumb,t_ms`.
void write_timing_csv(std::ostream& out, const TimingTable& table);
TimingTable read_timing_csv(std::istream& in);

double median(std::vector<double> values);

}  // namespace dusk
