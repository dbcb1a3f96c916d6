#pragma once

// Synthetic gestures drawn from a calibration profile. Letters become straight
// strokes from the thumb's resting point whose endpoint is
// mean + lambda * L * z (L the Cholesky factor of the key's covariance,
// z standard normal); start keys and function keys become taps.

#include "dusk/calibration.hpp"
#include "dusk/layout.hpp"
#include "dusk/log_record.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dusk {

struct MotorModel {
  double tap_ms = 90;
  double stroke_base_ms = 180;
  double stroke_ms_per_mm = 7;
  double sample_interval_ms = 16;
  double gap_alternating_ms = 200;
  double gap_same_thumb_ms = 300;
  /// Stimulus onset before touch-up for recorded calibration trials.
  double stimulus_lead_ms = 380;
};

/// Where each thumb rests: inside the center cell, left and right of the midline.
Vec2d rest_position(Thumb thumb, const PadSpec& pad);
Vec2d cell_center(CellId cell, const PadSpec& pad);

/// Straight line sampled every `interval_ms`, endpoints included.
Gesture line_gesture(const Vec2d& from, const Vec2d& to, double t_down, double duration_ms,
                     double interval_ms);

/// Endpoint displacement for `key` typed with `thumb`: mean + lambda * L * z.
Vec2d letter_displacement(const CalibrationProfile& profile, KeyId key, Thumb thumb,
                          const Vec2d& z, double lambda);

/// Gesture for a letter; the absolute endpoint is clamped to the pad.
Gesture letter_gesture(const CalibrationProfile& profile, KeyId key, Thumb thumb, const Vec2d& z,
                       double lambda, double t_down, const MotorModel& motor = {});

/// Tap in the cell bound to `function`. Throws Error when no cell is.
Gesture function_tap(const Layout& layout, const PadSpec& pad, KeyId function, double t_down,
                     const MotorModel& motor = {});

class Simulator {
 public:
  Simulator(CalibrationProfile profile, Layout layout, double lambda, std::uint64_t seed,
            MotorModel motor = {});

  /// Letters and spaces; one record per gesture.
  std::vector<GestureLogRecord> type_text(std::string_view text);
  /// A function-key tap as one record.
  GestureLogRecord press(KeyId function);
  /// For each phrase: a marker, then the phrase and a closing Space.
  std::vector<GestureLogRecord> session_log(std::span<const std::string> phrases);
  /// `repetitions` trials per letter and thumb, plus Space trials, each with
  /// a target key and stimulus time.
  std::vector<GestureLogRecord> calibration_log(std::size_t repetitions);

  double clock() const { return clock_; }

 private:
  GestureLogRecord next(Gesture g, Thumb thumb);
  double advance(Thumb thumb);

  CalibrationProfile profile_;
  Layout layout_;
  double lambda_;
  MotorModel motor_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double clock_ = 0;
  std::optional<Thumb> last_thumb_;
  std::int64_t next_pointer_ = 1;
};

}  // namespace dusk
