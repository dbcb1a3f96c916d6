#pragma once

// Shared test helpers: gesture builders, seeded generators, fixture paths.

#include "dusk/calibration.hpp"
#include "dusk/decoder.hpp"
#include "dusk/layout.hpp"
#include "dusk/lexicon.hpp"
#include "dusk/types.hpp"

#include <array>
#include <initializer_list>
#include <memory>
#include <random>
#include <string>

namespace dusk::test {

using Rng = std::mt19937_64;

inline std::string data_path(const std::string& name) { return std::string(DUSK_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) {
  return std::string(DUSK_FIXTURE_DIR) + "/" + name;
}

inline Gesture gesture(std::initializer_list<std::array<double, 3>> samples, std::int64_t id = 0) {
  Gesture g;
  g.pointer_id = id;
  for (const auto& s : samples) g.samples.push_back({s[0], s[1], s[2]});
  return g;
}

/// Straight line with `steps` + 1 samples, `dt` ms apart.
inline Gesture line(const Vec2d& from, const Vec2d& to, double t0 = 0, int steps = 8,
                    double dt = 16) {
  Gesture g;
  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    const Vec2d p = from + u * (to - from);
    g.samples.push_back({p.x(), p.y(), t0 + i * dt});
  }
  return g;
}

inline Gesture tap(const Vec2d& at, double t0 = 0) { return line(at, at, t0, 1, 80); }

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string random_word(Rng& rng, int min_len, int max_len, int alphabet = 26) {
  std::string w(static_cast<std::size_t>(uniform_int(rng, min_len, max_len)), 'a');
  for (char& c : w) c = static_cast<char>('a' + uniform_int(rng, 0, alphabet - 1));
  return w;
}

inline const Lexicon& bundled_lexicon() {
  static const Lexicon lex = load_lexicon_file(data_path("lexicon_en_5k.tsv")).lexicon;
  return lex;
}

inline std::shared_ptr<const DecoderModel> synthetic_model(bool with_lexicon = true) {
  const auto layout = default_layout();
  return DecoderModel::create(synth_profile(layout), layout,
                              with_lexicon ? std::optional<Lexicon>(bundled_lexicon())
                                           : std::nullopt);
}

inline Lexicon small_lexicon(std::initializer_list<std::pair<const char*, std::uint64_t>> words) {
  std::vector<LexiconEntry> entries;
  for (const auto& [w, c] : words) entries.push_back({w, c});
  return Lexicon(std::move(entries));
}

}  // namespace dusk::test
