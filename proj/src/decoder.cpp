#include "dusk/decoder.hpp"

#include "dusk/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dusk {

namespace {

const double kLogFloor = std::log(kLikelihoodFloor);

const BivariateNormal<double>* model_for(const DecoderModel& model, KeyId key, Thumb thumb,
                                         ModelFallback fallback) {
  if (const auto* g = model.gaussian(key, thumb)) return g;
  if (fallback == ModelFallback::OtherThumb) return model.gaussian(key, other(thumb));
  return nullptr;
}

double floored_log_likelihood(const DecoderModel& model, char letter, const StrokeInput& s) {
  const auto* g = model_for(model, key_from_char(letter), s.thumb, ModelFallback::OtherThumb);
  if (!g) return kLogFloor;
  return std::max(g->log_density(s.endpoint), kLogFloor);
}

std::vector<std::vector<KeyId>> top_letter_choices(const DecoderModel& model,
                                                   std::span<const StrokeInput> strokes) {
  std::vector<std::vector<KeyId>> choices;
  choices.reserve(strokes.size());
  for (const auto& s : strokes) choices.push_back(top_letters(model, s, 3));
  return choices;
}

std::size_t combination_count(const std::vector<std::vector<KeyId>>& choices) {
  std::size_t n = 1;
  for (const auto& c : choices) n *= c.size();
  return n;
}

// Trie nodes reached by every letter combination that is a lexicon prefix.
std::vector<std::int32_t> reachable_nodes(const Trie& trie,
                                          const std::vector<std::vector<KeyId>>& choices) {
  std::vector<std::int32_t> frontier{0};
  for (const auto& options : choices) {
    std::vector<std::int32_t> next;
    for (auto node : frontier) {
      for (KeyId key : options) {
        const auto child = trie.child(node, to_char(key));
        if (child != Trie::kNone) next.push_back(child);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

KeyEvent event(KeyEventKind kind, double t, std::string text = {}, std::string original = {}) {
  KeyEvent e;
  e.kind = kind;
  e.t = t;
  e.text = std::move(text);
  e.original = std::move(original);
  return e;
}

bool by_score(const ScoredWord& a, const ScoredWord& b) {
  return a.log_score != b.log_score ? a.log_score > b.log_score : a.word < b.word;
}

}  // namespace

// ---------------------------------------------------------------------------
// Model

DecoderModel::DecoderModel(CalibrationProfile profile, Layout layout,
                           std::optional<Lexicon> lexicon)
    : profile_(std::move(profile)), layout_(std::move(layout)), lexicon_(std::move(lexicon)) {
  validate(layout_);
  validate(profile_);
  for (Thumb thumb : kThumbs) {
    for (int i = 0; i < kLetterCount; ++i) {
      if (const auto* m = profile_.find(letter_key(i), thumb)) {
        gaussians_[static_cast<int>(thumb)][i].emplace(m->mean, m->cov);
      }
    }
  }
}

std::shared_ptr<const DecoderModel> DecoderModel::create(CalibrationProfile profile, Layout layout,
                                                         std::optional<Lexicon> lexicon) {
  return std::shared_ptr<const DecoderModel>(
      new DecoderModel(std::move(profile), std::move(layout), std::move(lexicon)));
}

const BivariateNormal<double>* DecoderModel::gaussian(KeyId key, Thumb thumb) const {
  if (!is_letter(key)) return nullptr;
  const auto& slot = gaussians_[static_cast<int>(thumb)][letter_index(key)];
  return slot ? &*slot : nullptr;
}

// ---------------------------------------------------------------------------
// Decoding primitives

Vec2d cursor_position(const DecoderModel& model, const NormalizedEndpoint& e, Thumb thumb) {
  return apply_transfer(model.profile().transfer_for(thumb), e);
}

KeyId select_key(const DecoderModel& model, const Gesture& stroke) {
  const Thumb thumb = infer_thumb(stroke, model.profile().pad);
  return nearest_letter(model.layout(), cursor_position(model, normalized_endpoint(stroke), thumb));
}

std::vector<LetterLikelihood> stroke_likelihoods(const DecoderModel& model,
                                                 const NormalizedEndpoint& e, Thumb thumb,
                                                 ModelFallback fallback) {
  std::vector<LetterLikelihood> out;
  out.reserve(kLetterCount);
  for (int i = 0; i < kLetterCount; ++i) {
    const KeyId key = letter_key(i);
    if (const auto* g = model_for(model, key, thumb, fallback)) {
      const double log_density = g->log_density(e);
      out.push_back({key, std::exp(log_density), log_density});
    }
  }
  return out;
}

std::vector<KeyId> top_letters(const DecoderModel& model, const StrokeInput& stroke, std::size_t k,
                               ModelFallback fallback) {
  auto ranked = stroke_likelihoods(model, stroke.endpoint, stroke.thumb, fallback);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.log_density > b.log_density;
  });
  std::vector<KeyId> out;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].key);
  return out;
}

std::vector<std::string> letter_combinations(std::span<const std::vector<KeyId>> choices) {
  std::vector<std::string> out{""};
  for (const auto& options : choices) {
    std::vector<std::string> next;
    next.reserve(out.size() * options.size());
    for (const auto& prefix : out) {
      for (KeyId key : options) next.push_back(prefix + to_char(key));
    }
    out = std::move(next);
  }
  return out;
}

CandidateSet candidate_words(const DecoderModel& model, std::span<const StrokeInput> strokes) {
  CandidateSet out;
  const auto* lex = model.lexicon();
  if (strokes.empty()) return out;
  const auto choices = top_letter_choices(model, strokes);
  out.combinations = combination_count(choices);
  if (!lex) return out;

  lex->note_lookup();
  for (auto node : reachable_nodes(lex->trie(), choices)) {
    if (const auto value = lex->trie().value(node); value != Trie::kNone) {
      out.words.push_back(lex->entry(value).word);
    }
  }
  std::sort(out.words.begin(), out.words.end());
  return out;
}

double log_input_probability(const DecoderModel& model, std::string_view word,
                             std::span<const StrokeInput> strokes) {
  if (word.size() < strokes.size()) throw Error("word shorter than the stroke sequence");
  double total = 0;
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    total += floored_log_likelihood(model, word[i], strokes[i]);
  }
  return total;
}

std::vector<ScoredWord> word_posterior(const DecoderModel& model,
                                       std::span<const StrokeInput> strokes,
                                       std::span<const std::string> candidates) {
  const auto* lex = model.lexicon();
  if (!lex) throw Error("word_posterior needs a lexicon");
  std::vector<ScoredWord> out;
  if (candidates.empty()) return out;
  double total = 0;
  for (const auto& c : candidates) total += static_cast<double>(lex->count(c));
  for (const auto& c : candidates) {
    const double prior = static_cast<double>(lex->count(c)) / total;
    out.push_back({c, log_input_probability(model, c, strokes) + std::log(prior)});
  }
  std::sort(out.begin(), out.end(), by_score);
  return out;
}

std::vector<ScoredWord> completions(const DecoderModel& model,
                                    std::span<const StrokeInput> strokes, std::size_t k) {
  std::vector<ScoredWord> out;
  const auto* lex = model.lexicon();
  if (!lex || strokes.empty() || k == 0) return out;

  lex->note_lookup();
  const auto& trie = lex->trie();
  std::vector<std::int32_t> hits;
  for (auto node : reachable_nodes(trie, top_letter_choices(model, strokes))) {
    trie.collect(node, hits);
  }
  // Distinct prefixes of equal length own disjoint subtrees, so no duplicates.
  double total = 0;
  for (auto i : hits) total += static_cast<double>(lex->entry(i).count);
  out.reserve(hits.size());
  for (auto i : hits) {
    const auto& e = lex->entry(i);
    out.push_back({e.word, log_input_probability(model, e.word, strokes) +
                               std::log(static_cast<double>(e.count) / total)});
  }
  const std::size_t keep = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(),
                    by_score);
  out.resize(keep);
  return out;
}

// ---------------------------------------------------------------------------
// Session

std::string_view to_string(KeyEventKind k) {
  switch (k) {
    case KeyEventKind::Char: return "char";
    case KeyEventKind::Space: return "space";
    case KeyEventKind::Backspace: return "backspace";
    case KeyEventKind::Enter: return "enter";
    case KeyEventKind::SuggestAccepted: return "suggest_accepted";
    case KeyEventKind::AutocorrectApplied: return "autocorrect_applied";
    case KeyEventKind::AutocorrectReverted: return "autocorrect_reverted";
    case KeyEventKind::CursorFeedback: return "cursor";
  }
  return "?";
}

Session::Session(std::shared_ptr<const DecoderModel> model, SessionOptions options)
    : model_(std::move(model)), options_(options) {
  if (!model_) throw Error("session needs a decoder model");
  if (options_.predictions_enabled && !model_->lexicon()) {
    throw Error("predictions need a lexicon");
  }
}

void Session::set_predictions_enabled(bool enabled) {
  if (enabled && !model_->lexicon()) throw Error("predictions need a lexicon");
  options_.predictions_enabled = enabled;
  refresh_suggestions();
}

void Session::reset_text() {
  committed_.clear();
  current_word_.clear();
  strokes_.clear();
  suggestions_.clear();
  last_autocorrect_.reset();
  suppress_autocorrect_ = false;
}

std::optional<std::string> Session::autocorrect_on_space() const {
  if (!options_.predictions_enabled || current_word_.empty()) return std::nullopt;
  const auto candidates = candidate_words(*model_, strokes_);
  if (candidates.words.empty()) return std::nullopt;
  const auto ranked = word_posterior(*model_, strokes_, candidates.words);
  if (ranked.front().word == current_word_) return std::nullopt;
  return ranked.front().word;
}

void Session::refresh_suggestions() {
  suggestions_.clear();
  if (!options_.predictions_enabled || current_word_.empty()) return;
  for (auto& s : completions(*model_, strokes_, 2)) suggestions_.push_back(std::move(s.word));
}

void Session::append_letter(KeyId key, const StrokeInput& stroke, const Vec2d& cursor, double t,
                            std::vector<KeyEvent>& out) {
  current_word_.push_back(to_char(key));
  strokes_.push_back(stroke);
  auto e = event(KeyEventKind::Char, t, std::string(1, to_char(key)));
  e.thumb = stroke.thumb;
  e.cursor = cursor;
  out.push_back(std::move(e));
  refresh_suggestions();
}

void Session::press(KeyId function, double t, std::vector<KeyEvent>& out) {
  switch (function) {
    case KeyId::Space: {
      std::string word = current_word_;
      if (!word.empty() && !suppress_autocorrect_) {
        if (auto replacement = autocorrect_on_space()) {
          out.push_back(event(KeyEventKind::AutocorrectApplied, t, *replacement, word));
          last_autocorrect_ = AutocorrectMemory{word, *replacement, strokes_};
          word = *replacement;
        }
      }
      committed_ += word;
      committed_ += ' ';
      current_word_.clear();
      strokes_.clear();
      suppress_autocorrect_ = false;
      out.push_back(event(KeyEventKind::Space, t, " "));
      break;
    }
    case KeyId::Backspace: {
      if (last_autocorrect_) {
        auto memory = std::move(*last_autocorrect_);
        last_autocorrect_.reset();
        committed_.resize(committed_.size() - memory.replacement.size() - 1);
        current_word_ = memory.original;
        strokes_ = std::move(memory.strokes);
        suppress_autocorrect_ = true;
        out.push_back(
            event(KeyEventKind::AutocorrectReverted, t, memory.original, memory.replacement));
      } else if (!current_word_.empty()) {
        const char deleted = current_word_.back();
        current_word_.pop_back();
        strokes_.pop_back();
        if (current_word_.empty()) suppress_autocorrect_ = false;
        out.push_back(event(KeyEventKind::Backspace, t, std::string(1, deleted)));
      } else if (!committed_.empty()) {
        const char deleted = committed_.back();
        committed_.pop_back();
        out.push_back(event(KeyEventKind::Backspace, t, std::string(1, deleted)));
      } else {
        out.push_back(event(KeyEventKind::Backspace, t));
      }
      break;
    }
    case KeyId::Enter: {
      const std::string word = current_word_;
      committed_ += word;
      current_word_.clear();
      strokes_.clear();
      suppress_autocorrect_ = false;
      out.push_back(event(KeyEventKind::Enter, t, word));
      break;
    }
    case KeyId::Suggest1:
    case KeyId::Suggest2: {
      const std::size_t slot = function == KeyId::Suggest1 ? 0 : 1;
      if (!options_.predictions_enabled || slot >= suggestions_.size()) break;
      const std::string word = suggestions_[slot];
      const std::string original = current_word_;
      committed_ += word;
      committed_ += ' ';
      current_word_.clear();
      strokes_.clear();
      suppress_autocorrect_ = false;
      out.push_back(event(KeyEventKind::SuggestAccepted, t, word, original));
      break;
    }
    default:
      throw Error("press: not a function key");
  }
  refresh_suggestions();
}

std::vector<KeyEvent> Session::feed_touch(const Gesture& g) {
  try {
    validate(g);
  } catch (const ParseError& e) {
    throw DecodeError(e.what());
  }
  if (g.up_time() < last_up_) {
    throw DecodeError("gesture ends before the previous one (out-of-order timestamps)");
  }
  last_up_ = g.up_time();

  const auto& profile = model_->profile();
  const Thumb thumb = infer_thumb(g, profile.pad);
  const StrokeInput stroke{normalized_endpoint(g), thumb};
  std::vector<KeyEvent> out;

  if (classify_contact(g, profile.tap_threshold_mm) == ContactClass::Tap) {
    const CellId cell = recognize_tap(g, profile.pad, profile.tap_threshold_mm);
    if (cell.is_center()) {
      last_autocorrect_.reset();
      const KeyId key = model_->layout().start_key(thumb);
      append_letter(key, stroke, key_position(model_->layout(), key), g.up_time(), out);
    } else if (auto function = model_->layout().tap_function(cell)) {
      if (*function != KeyId::Backspace) last_autocorrect_.reset();
      press(*function, g.up_time(), out);
    } else {
      last_autocorrect_.reset();
    }
    return out;
  }

  last_autocorrect_.reset();
  const auto& tf = profile.transfer_for(thumb);
  const Vec2d start = g.first().position();
  for (const auto& s : g.samples) {
    auto e = event(KeyEventKind::CursorFeedback, s.t);
    e.thumb = thumb;
    e.cursor = apply_transfer(tf, s.position() - start);
    out.push_back(std::move(e));
  }
  const Vec2d cursor = apply_transfer(tf, stroke.endpoint);
  append_letter(nearest_letter(model_->layout(), cursor), stroke, cursor, g.up_time(), out);
  return out;
}

}  // namespace dusk
