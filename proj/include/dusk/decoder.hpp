#pragma once

// The keyboard state machine. Every stroke deterministically selects the key
// nearest to its transfer-mapped cursor, so any string can be typed. With
// predictions enabled, a Bayesian layer (product of per-stroke Gaussian
// likelihoods times normalized word frequency) drives autocorrect on Space
// and top-2 word completion.

#include "dusk/calibration.hpp"
#include "dusk/gaussian.hpp"
#include "dusk/layout.hpp"
#include "dusk/lexicon.hpp"
#include "dusk/types.hpp"

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dusk {

class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Immutable decoder inputs shared by any number of sessions.
class DecoderModel {
 public:
  static std::shared_ptr<const DecoderModel> create(CalibrationProfile profile, Layout layout,
                                                    std::optional<Lexicon> lexicon = std::nullopt);

  const CalibrationProfile& profile() const { return profile_; }
  const Layout& layout() const { return layout_; }
  const Lexicon* lexicon() const { return lexicon_ ? &*lexicon_ : nullptr; }
  const BivariateNormal<double>* gaussian(KeyId key, Thumb thumb) const;

 private:
  DecoderModel(CalibrationProfile profile, Layout layout, std::optional<Lexicon> lexicon);

  CalibrationProfile profile_;
  Layout layout_;
  std::optional<Lexicon> lexicon_;
  std::array<std::array<std::optional<BivariateNormal<double>>, kLetterCount>, 2> gaussians_;
};

struct StrokeInput {
  NormalizedEndpoint endpoint = NormalizedEndpoint::Zero();
  Thumb thumb = Thumb::Left;
  bool operator==(const StrokeInput&) const = default;
};

enum class ModelFallback : std::uint8_t {
  /// Letters without a model for the stroke's thumb are excluded.
  SameThumbOnly,
  /// Such letters use the other thumb's model instead.
  OtherThumb,
};

struct LetterLikelihood {
  KeyId key;
  double density;      // per mm^2, not normalized across letters
  double log_density;
};

/// Per-stroke likelihoods floor at this value before entering a product.
inline constexpr double kLikelihoodFloor = 1e-300;

// ---------------------------------------------------------------------------
// Free functions over the model

/// Key reached by a stroke: nearest letter center to the transfer-mapped
/// endpoint of the stroke's thumb (inferred from the start position).
KeyId select_key(const DecoderModel& model, const Gesture& stroke);

/// Keyboard position of the cursor for a displacement made with `thumb`.
Vec2d cursor_position(const DecoderModel& model, const NormalizedEndpoint& e, Thumb thumb);

/// Bivariate normal density of `e` under each letter's model, letter order.
std::vector<LetterLikelihood> stroke_likelihoods(const DecoderModel& model,
                                                 const NormalizedEndpoint& e, Thumb thumb,
                                                 ModelFallback fallback = ModelFallback::SameThumbOnly);

/// The `k` most likely letters for a stroke, ties to the earlier letter.
std::vector<KeyId> top_letters(const DecoderModel& model, const StrokeInput& stroke,
                               std::size_t k = 3,
                               ModelFallback fallback = ModelFallback::OtherThumb);

/// Every string formed by taking one letter per position (cartesian product).
std::vector<std::string> letter_combinations(std::span<const std::vector<KeyId>> choices);

struct CandidateSet {
  /// Letter combinations before lexicon filtering (product of choice sizes).
  std::size_t combinations = 0;
  /// Combinations that are lexicon words, sorted.
  std::vector<std::string> words;
};

/// Top-3 letters per stroke, all combinations, kept when in the lexicon.
CandidateSet candidate_words(const DecoderModel& model, std::span<const StrokeInput> strokes);

struct ScoredWord {
  std::string word;
  double log_score = 0;  // log P(I|W) + log P(W)
  bool operator==(const ScoredWord&) const = default;
};

/// Sum over strokes of floored log likelihood of the word's letters.
double log_input_probability(const DecoderModel& model, std::string_view word,
                             std::span<const StrokeInput> strokes);

/// Candidates scored by P(I|W) * P(W), best first; ties by word.
std::vector<ScoredWord> word_posterior(const DecoderModel& model,
                                       std::span<const StrokeInput> strokes,
                                       std::span<const std::string> candidates);

/// Words extending any top-3 letter combination, scored by the typed-prefix
/// likelihood times frequency normalized over that union; best `k`.
std::vector<ScoredWord> completions(const DecoderModel& model,
                                    std::span<const StrokeInput> strokes, std::size_t k = 2);

// ---------------------------------------------------------------------------
// Session

enum class KeyEventKind : std::uint8_t {
  Char,
  Space,
  Backspace,
  Enter,
  SuggestAccepted,
  AutocorrectApplied,
  AutocorrectReverted,
  CursorFeedback,
};

std::string_view to_string(KeyEventKind k);

struct KeyEvent {
  KeyEventKind kind = KeyEventKind::Char;
  double t = 0;  // ms, time of the sample or touch-up that produced it
  /// Char: the letter. Backspace: the deleted character (empty for a no-op).
  /// Enter: the word committed. SuggestAccepted / AutocorrectApplied: the new
  /// word. AutocorrectReverted: the restored literal.
  std::string text;
  /// The word that was replaced (SuggestAccepted, AutocorrectApplied,
  /// AutocorrectReverted).
  std::string original;
  Thumb thumb = Thumb::Left;
  Vec2d cursor = Vec2d::Zero();  // key units; Char and CursorFeedback

  bool operator==(const KeyEvent&) const = default;
};

struct SessionOptions {
  bool predictions_enabled = true;
};

struct AutocorrectMemory {
  std::string original;
  std::string replacement;
  std::vector<StrokeInput> strokes;
};

class Session {
 public:
  explicit Session(std::shared_ptr<const DecoderModel> model, SessionOptions options = {});

  /// Routes one completed contact. Throws DecodeError (leaving the session
  /// untouched) when timestamps run backwards.
  std::vector<KeyEvent> feed_touch(const Gesture& g);

  /// Autocorrect decision for the current word; does not modify the session.
  std::optional<std::string> autocorrect_on_space() const;

  const DecoderModel& model() const { return *model_; }
  const SessionOptions& options() const { return options_; }
  void set_predictions_enabled(bool enabled);

  const std::string& committed_text() const { return committed_; }
  const std::string& current_word() const { return current_word_; }
  std::string text() const { return committed_ + current_word_; }
  const std::vector<StrokeInput>& current_strokes() const { return strokes_; }
  const std::vector<std::string>& suggestions() const { return suggestions_; }
  const std::optional<AutocorrectMemory>& last_autocorrect() const { return last_autocorrect_; }

  /// Clears text, suggestions and memory (new phrase). Keeps the clock.
  void reset_text();

 private:
  void append_letter(KeyId key, const StrokeInput& stroke, const Vec2d& cursor, double t,
                     std::vector<KeyEvent>& out);
  void press(KeyId function, double t, std::vector<KeyEvent>& out);
  void refresh_suggestions();

  std::shared_ptr<const DecoderModel> model_;
  SessionOptions options_;
  std::string committed_;
  std::string current_word_;
  std::vector<StrokeInput> strokes_;
  std::vector<std::string> suggestions_;
  std::optional<AutocorrectMemory> last_autocorrect_;
  bool suppress_autocorrect_ = false;
  double last_up_ = -std::numeric_limits<double>::infinity();
};

}  // namespace dusk
