#include "dusk/simulation.hpp"

#include "dusk/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace dusk {

Vec2d rest_position(Thumb thumb, const PadSpec& pad) {
  return {(thumb == Thumb::Left ? 0.4 : 0.6) * pad.width, 0.5 * pad.height};
}

Vec2d cell_center(CellId cell, const PadSpec& pad) {
  return {(cell.col + 0.5) * pad.width / 3.0, (cell.row + 0.5) * pad.height / 3.0};
}

Gesture line_gesture(const Vec2d& from, const Vec2d& to, double t_down, double duration_ms,
                     double interval_ms) {
  const int steps = std::max(1, static_cast<int>(std::ceil(duration_ms / interval_ms)));
  Gesture g;
  g.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    const Vec2d p = from + u * (to - from);
    g.samples.push_back({p.x(), p.y(), t_down + u * duration_ms});
  }
  return g;
}

Vec2d letter_displacement(const CalibrationProfile& profile, KeyId key, Thumb thumb,
                          const Vec2d& z, double lambda) {
  const auto* model = profile.find(key, thumb);
  if (!model) throw Error("profile has no model for " + to_string(key) + "/" +
                          std::string(to_string(thumb)));
  if (lambda == 0) return model->mean;
  const BivariateNormal<double> normal(model->mean, model->cov);
  return model->mean + lambda * normal.cholesky_factor() * z;
}

Gesture letter_gesture(const CalibrationProfile& profile, KeyId key, Thumb thumb, const Vec2d& z,
                       double lambda, double t_down, const MotorModel& motor) {
  const Vec2d start = rest_position(thumb, profile.pad);
  const Vec2d end = profile.pad.clamp(start + letter_displacement(profile, key, thumb, z, lambda));
  const double length = (end - start).norm();
  if (length < profile.tap_threshold_mm) {
    // Short enough to be a tap: touch and lift near the resting point.
    return line_gesture(start, end, t_down, motor.tap_ms, motor.tap_ms);
  }
  return line_gesture(start, end, t_down, motor.stroke_base_ms + motor.stroke_ms_per_mm * length,
                      motor.sample_interval_ms);
}

Gesture function_tap(const Layout& layout, const PadSpec& pad, KeyId function, double t_down,
                     const MotorModel& motor) {
  for (const auto& [cell, key] : layout.tap_map) {
    if (key == function) {
      const Vec2d at = cell_center(cell, pad);
      return line_gesture(at, at, t_down, motor.tap_ms, motor.tap_ms);
    }
  }
  throw Error("layout binds no tap cell to " + to_string(function));
}

Simulator::Simulator(CalibrationProfile profile, Layout layout, double lambda,
                     std::uint64_t seed, MotorModel motor)
    : profile_(std::move(profile)),
      layout_(std::move(layout)),
      lambda_(lambda),
      motor_(motor),
      rng_(seed) {
  if (lambda_ < 0) throw Error("noise level must be nonnegative");
}

double Simulator::advance(Thumb thumb) {
  if (last_thumb_) {
    clock_ += *last_thumb_ == thumb ? motor_.gap_same_thumb_ms : motor_.gap_alternating_ms;
  }
  last_thumb_ = thumb;
  return clock_;
}

GestureLogRecord Simulator::next(Gesture g, Thumb thumb) {
  g.pointer_id = next_pointer_++;
  clock_ = g.up_time();
  GestureLogRecord r;
  r.thumb = thumb;
  r.pointer_id = g.pointer_id;
  r.gesture = std::move(g);
  return r;
}

GestureLogRecord Simulator::press(KeyId function) {
  auto g = function_tap(layout_, profile_.pad, function, 0, motor_);
  const Thumb thumb = infer_thumb(g, profile_.pad);
  const double t = advance(thumb);
  for (auto& s : g.samples) s.t += t;
  return next(std::move(g), thumb);
}

std::vector<GestureLogRecord> Simulator::type_text(std::string_view text) {
  std::vector<GestureLogRecord> out;
  for (char c : text) {
    if (c == ' ') {
      out.push_back(press(KeyId::Space));
      continue;
    }
    const KeyId key = key_from_char(c);
    const Thumb thumb = layout_.thumb_for(key);
    const Vec2d z(normal_(rng_), normal_(rng_));
    const double t = advance(thumb);
    out.push_back(next(letter_gesture(profile_, key, thumb, z, lambda_, t, motor_), thumb));
  }
  return out;
}

std::vector<GestureLogRecord> Simulator::session_log(std::span<const std::string> phrases) {
  std::vector<GestureLogRecord> out;
  for (const auto& phrase : phrases) {
    GestureLogRecord marker;
    marker.phrase = phrase;
    out.push_back(std::move(marker));
    auto typed = type_text(phrase + " ");
    std::move(typed.begin(), typed.end(), std::back_inserter(out));
    clock_ += 2000;  // reading the next phrase
    last_thumb_.reset();
  }
  return out;
}

std::vector<GestureLogRecord> Simulator::calibration_log(std::size_t repetitions) {
  std::vector<GestureLogRecord> out;
  auto trial = [&](GestureLogRecord r, KeyId key) {
    r.target_key = key;
    r.stimulus_t = r.gesture.up_time() - motor_.stimulus_lead_ms;
    out.push_back(std::move(r));
    clock_ += 1000;  // next stimulus
    last_thumb_.reset();
  };
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (Thumb thumb : kThumbs) {
      for (int i = 0; i < kLetterCount; ++i) {
        const KeyId key = letter_key(i);
        const Vec2d z(normal_(rng_), normal_(rng_));
        const double t = advance(thumb);
        trial(next(letter_gesture(profile_, key, thumb, z, lambda_, t, motor_), thumb), key);
      }
    }
    trial(press(KeyId::Space), KeyId::Space);
  }
  return out;
}

}  // namespace dusk
