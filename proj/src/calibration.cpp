#include "dusk/calibration.hpp"

#include "dusk/recognizer.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace dusk {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Thumb record_thumb(const GestureLogRecord& r, const PadSpec& pad) {
  return r.thumb ? *r.thumb : infer_thumb(r.gesture, pad);
}

}  // namespace

// ---------------------------------------------------------------------------
// Profile

const KeyEndpointModel* CalibrationProfile::find(KeyId key, Thumb thumb) const {
  if (!is_letter(key)) return nullptr;
  const auto& slot = models[static_cast<int>(thumb)][letter_index(key)];
  return slot ? &*slot : nullptr;
}

void CalibrationProfile::set(const KeyEndpointModel& m) {
  if (!is_letter(m.key)) throw Error("endpoint models exist for letters only");
  models[static_cast<int>(m.thumb)][letter_index(m.key)] = m;
}

std::size_t CalibrationProfile::model_count() const {
  std::size_t n = 0;
  for (const auto& per_thumb : models) {
    for (const auto& slot : per_thumb) n += slot.has_value();
  }
  return n;
}

void validate(const CalibrationProfile& p) {
  if (!p.pad.valid()) throw Error("profile: invalid pad");
  for (int i = 0; i < kLetterCount; ++i) {
    if (!p.find(letter_key(i), Thumb::Left) && !p.find(letter_key(i), Thumb::Right)) {
      throw Error("profile: no model for letter " + to_string(letter_key(i)));
    }
  }
  for (const auto& tf : p.transfer) {
    if (!tf.coefficients.allFinite()) throw Error("profile: non-finite transfer coefficients");
  }
}

nlohmann::json to_json(const CalibrationProfile& p) {
  nlohmann::json models = nlohmann::json::array();
  for (Thumb thumb : kThumbs) {
    for (int i = 0; i < kLetterCount; ++i) {
      const auto* m = p.find(letter_key(i), thumb);
      if (!m) continue;
      models.push_back({{"key", to_string(m->key)},
                        {"thumb", to_string(m->thumb)},
                        {"mean", {m->mean.x(), m->mean.y()}},
                        {"cov", {{m->cov(0, 0), m->cov(0, 1)}, {m->cov(1, 0), m->cov(1, 1)}}},
                        {"sample_count", m->sample_count}});
    }
  }
  nlohmann::json transfer = nlohmann::json::object();
  for (const auto& tf : p.transfer) {
    transfer[std::string(to_string(tf.thumb))] = {{"a_x", tf.a_x()}, {"b_x", tf.b_x()},
                                                  {"c_x", tf.c_x()}, {"a_y", tf.a_y()},
                                                  {"b_y", tf.b_y()}, {"c_y", tf.c_y()}};
  }
  return {{"schema_version", kProfileSchemaVersion},
          {"pad", {{"width_mm", p.pad.width}, {"height_mm", p.pad.height}}},
          {"tap_threshold_mm", p.tap_threshold_mm},
          {"tap_grid", {3, 3}},
          {"models", models},
          {"transfer", transfer}};
}

CalibrationProfile profile_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kProfileSchemaVersion) {
      throw ParseError("unsupported profile schema version " + std::to_string(version));
    }
    CalibrationProfile p;
    p.pad = {j.at("pad").at("width_mm").get<double>(), j.at("pad").at("height_mm").get<double>()};
    p.tap_threshold_mm = j.value("tap_threshold_mm", kDefaultTapThresholdMm);
    for (const auto& item : j.at("models")) {
      KeyEndpointModel m;
      m.key = key_from_string(item.at("key").get<std::string>());
      m.thumb = thumb_from_string(item.at("thumb").get<std::string>());
      const auto& mean = item.at("mean");
      m.mean = {mean.at(0).get<double>(), mean.at(1).get<double>()};
      const auto& cov = item.at("cov");
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) m.cov(r, c) = cov.at(r).at(c).get<double>();
      }
      m.sample_count = item.value("sample_count", std::size_t{0});
      p.set(m);
    }
    for (Thumb thumb : kThumbs) {
      const auto& t = j.at("transfer").at(std::string(to_string(thumb)));
      auto& tf = p.transfer[static_cast<int>(thumb)];
      tf.thumb = thumb;
      tf.coefficients << t.at("a_x").get<double>(), t.at("b_x").get<double>(),
          t.at("c_x").get<double>(), t.at("a_y").get<double>(), t.at("b_y").get<double>(),
          t.at("c_y").get<double>();
    }
    validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Endpoint statistics

std::pair<Vec2d, Mat2d> mean_and_covariance(std::span<const Vec2d> points) {
  if (points.empty()) throw Error("mean_and_covariance: no points");
  Vec2d mean = Vec2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat2d cov = Mat2d::Zero();
  if (points.size() > 1) {
    for (const auto& p : points) {
      const Vec2d d = p - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size() - 1);
  }
  return {mean, cov};
}

std::vector<std::size_t> filter_outliers(std::span<const Vec2d> points, double sd_multiplier) {
  std::vector<std::size_t> kept;
  if (points.empty()) return kept;
  const auto [mean, cov] = mean_and_covariance(points);
  const double radius = sd_multiplier * std::sqrt(cov.trace() / 2.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((points[i] - mean).norm() <= radius) kept.push_back(i);
  }
  return kept;
}

EndpointStats endpoint_stats(std::span<const GestureLogRecord> log, const PadSpec& pad,
                             const EndpointStatsOptions& options) {
  std::map<std::pair<Thumb, KeyId>, std::vector<std::size_t>> groups;
  EndpointStats stats;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log[i];
    if (!r.target_key || !is_letter(*r.target_key) || r.gesture.samples.empty()) continue;
    groups[{record_thumb(r, pad), *r.target_key}].push_back(i);
    ++stats.considered;
  }

  for (const auto& [group, indices] : groups) {
    const auto [thumb, key] = group;
    std::vector<Vec2d> endpoints;
    endpoints.reserve(indices.size());
    for (std::size_t i : indices) endpoints.push_back(normalized_endpoint(log[i].gesture));

    const auto kept = filter_outliers(endpoints, options.sd_multiplier);
    if (kept.size() < options.min_samples) {
      stats.omitted.push_back({key, thumb, indices.size(), kept.size()});
      continue;
    }
    std::vector<Vec2d> survivors;
    survivors.reserve(kept.size());
    for (std::size_t k : kept) {
      survivors.push_back(endpoints[k]);
      stats.survivors.push_back(indices[k]);
    }
    auto [mean, cov] = mean_and_covariance(survivors);
    cov += options.regularization_mm2 * Mat2d::Identity();
    stats.models.push_back({key, thumb, mean, cov, survivors.size()});
  }
  std::sort(stats.survivors.begin(), stats.survivors.end());
  return stats;
}

// ---------------------------------------------------------------------------
// Transfer function

Eigen::Matrix<double, 2, 3> fit_affine(std::span<const Vec2d> inputs,
                                       std::span<const Vec2d> targets) {
  if (inputs.size() != targets.size()) throw Error("fit_affine: size mismatch");
  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixX3d design(n, 3);
  Eigen::MatrixX2d rhs(n, 2);
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto i = static_cast<std::size_t>(row);
    design.row(row) << inputs[i].x(), inputs[i].y(), 1.0;
    rhs.row(row) = targets[i].transpose();
  }
  const auto qr = design.colPivHouseholderQr();
  if (n < 3 || qr.rank() < 3) throw FitError("inputs are collinear (rank-deficient design)");
  const Eigen::Matrix<double, 3, 2> solution = qr.solve(rhs);
  return solution.transpose();
}

std::array<TransferFn, 2> fit_transfer(std::span<const GestureLogRecord> log,
                                       const Layout& layout, const PadSpec& pad) {
  std::array<std::vector<std::size_t>, 2> rows;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log[i];
    if (!r.target_key || !is_letter(*r.target_key) || r.gesture.samples.empty()) continue;
    rows[static_cast<int>(record_thumb(r, pad))].push_back(i);
  }

  std::array<TransferFn, 2> out;
  for (Thumb thumb : kThumbs) {
    const auto& idx = rows[static_cast<int>(thumb)];
    if (idx.size() < 6) {
      throw FitError("fit_transfer: " + std::string(to_string(thumb)) + " thumb has " +
                     std::to_string(idx.size()) + " records, need at least 6");
    }
    std::vector<Vec2d> inputs, targets;
    for (std::size_t i : idx) {
      inputs.push_back(normalized_endpoint(log[i].gesture));
      targets.push_back(key_position(layout, *log[i].target_key));
    }
    try {
      out[static_cast<int>(thumb)] = {thumb, fit_affine(inputs, targets)};
    } catch (const FitError& e) {
      throw FitError("fit_transfer: " + std::string(to_string(thumb)) + " thumb: " + e.what());
    }
  }
  return out;
}

FitReport fit_profile(std::span<const GestureLogRecord> log, const Layout& layout,
                      const PadSpec& pad, const EndpointStatsOptions& options) {
  FitReport report;
  report.stats = endpoint_stats(log, pad, options);

  std::vector<GestureLogRecord> kept;
  kept.reserve(report.stats.survivors.size());
  for (std::size_t i : report.stats.survivors) kept.push_back(log[i]);

  report.profile.pad = pad;
  report.profile.transfer = fit_transfer(kept, layout, pad);
  for (const auto& m : report.stats.models) report.profile.set(m);
  validate(report.profile);
  return report;
}

CalibrationProfile synth_profile(const Layout& layout, const PadSpec& pad, double spread_mm,
                                 double mm_per_key) {
  CalibrationProfile p;
  p.pad = pad;
  for (Thumb thumb : kThumbs) {
    const Vec2d start = key_position(layout, layout.start_key(thumb));
    for (int i = 0; i < kLetterCount; ++i) {
      const KeyId key = letter_key(i);
      // sample_count is nominal: ten repetitions per key, as in a calibration session.
      p.set({key, thumb, mm_per_key * (key_position(layout, key) - start),
             spread_mm * spread_mm * Mat2d::Identity(), 10});
    }
    auto& tf = p.transfer[static_cast<int>(thumb)];
    tf.thumb = thumb;
    tf.coefficients << 1.0 / mm_per_key, 0.0, start.x(), 0.0, 1.0 / mm_per_key, start.y();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Timing

std::optional<double> TimingTable::find(KeyId key, Thumb thumb) const {
  if (auto it = entries_.find({key, thumb}); it != entries_.end()) return it->second;
  return std::nullopt;
}

double TimingTable::at(KeyId key, Thumb thumb) const {
  if (auto v = find(key, thumb)) return *v;
  throw Error("timing table has no entry for " + to_string(key) + "/" +
              std::string(to_string(thumb)));
}

std::vector<KeyId> TimingTable::missing(const Layout& layout) const {
  std::vector<KeyId> out;
  for (int i = 0; i <= kLetterCount; ++i) {
    const KeyId key = i < kLetterCount ? letter_key(i) : KeyId::Space;
    if (!find(key, layout.thumb_for(key))) out.push_back(key);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

TimingDerivation derive_timing_table(std::span<const GestureLogRecord> log, const PadSpec& pad,
                                     double tap_threshold_mm) {
  std::map<std::pair<KeyId, Thumb>, std::vector<double>> strokes, taps;
  for (const auto& r : log) {
    if (!r.target_key || r.gesture.samples.empty()) continue;
    const auto group = std::make_pair(*r.target_key, record_thumb(r, pad));
    if (classify_contact(r.gesture, tap_threshold_mm) == ContactClass::Stroke) {
      strokes[group].push_back(r.gesture.duration());
    } else {
      if (!r.stimulus_t) {
        throw ParseError("tap record for " + to_string(*r.target_key) + " has no stimulus_t");
      }
      taps[group].push_back(r.gesture.up_time() - *r.stimulus_t);
    }
  }

  TimingDerivation out;
  for (const auto& [group, durations] : strokes) {
    out.table.set(group.first, group.second, median(durations) + kTapInPlaceMs);
  }
  // A key selected by tapping (e.g. a start key tapped in place) takes its
  // tap timing even when stray strokes were also recorded for it.
  for (const auto& [group, latencies] : taps) {
    double t = median(latencies) - kVisualReactionMs;
    if (t < 1.0) {
      out.warnings.push_back("tap time for " + to_string(group.first) + "/" +
                             std::string(to_string(group.second)) + " is " + format_double(t) +
                             " ms after removing reaction time; floored at 1 ms");
      t = 1.0;
    }
    out.table.set(group.first, group.second, t);
  }
  return out;
}

void write_timing_csv(std::ostream& out, const TimingTable& table) {
  out << "key,thumb,t_ms\n";
  for (const auto& [group, ms] : table.entries()) {
    out << to_string(group.first) << ',' << to_string(group.second) << ',' << format_double(ms)
        << '\n';
  }
}

TimingTable read_timing_csv(std::istream& in) {
  TimingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("key,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string key, thumb, ms;
    if (!std::getline(ss, key, ',') || !std::getline(ss, thumb, ',') || !std::getline(ss, ms)) {
      throw ParseError("expected key,thumb,t_ms", line_no);
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(ms.data(), ms.data() + ms.size(), value);
    if (ec != std::errc() || ptr != ms.data() + ms.size() || !(value > 0)) {
      throw ParseError("t_ms must be a positive number", line_no);
    }
    try {
      table.set(key_from_string(key), thumb_from_string(thumb), value);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return table;
}

}  // namespace dusk
