#pragma once

// Unigram frequency dictionary over lowercase a-z words, backed by a trie for
// prefix search.

#include "dusk/types.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dusk {

inline constexpr std::size_t kDefaultLexiconCap = 50000;

class Trie {
 public:
  static constexpr std::int32_t kNone = -1;

  Trie();
  void insert(std::string_view word, std::int32_t value);

  /// Node reached by walking `prefix`, or kNone.
  std::int32_t find(std::string_view prefix) const;
  std::int32_t child(std::int32_t node, char c) const;
  /// Value stored at `node`, or kNone if no word ends there.
  std::int32_t value(std::int32_t node) const { return nodes_[static_cast<std::size_t>(node)].value; }

  /// Values of every word in the subtree of `node`, in lexicographic order.
  void collect(std::int32_t node, std::vector<std::int32_t>& out) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::array<std::int32_t, 26> next;
    std::int32_t value = kNone;
    Node() { next.fill(kNone); }
  };
  std::vector<Node> nodes_;
};

struct LexiconEntry {
  std::string word;
  std::uint64_t count = 0;
};

class Lexicon {
 public:
  Lexicon() = default;
  /// Keeps the `cap` highest counts (ties by word), duplicates already merged.
  Lexicon(std::vector<LexiconEntry> entries, std::size_t cap = kDefaultLexiconCap);

  Lexicon(const Lexicon& other);
  Lexicon& operator=(const Lexicon& other);
  Lexicon(Lexicon&&) noexcept;
  Lexicon& operator=(Lexicon&&) noexcept;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Entries sorted by descending count, ties by word.
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  bool contains(std::string_view word) const;
  /// 0 for unknown words.
  std::uint64_t count(std::string_view word) const;

  /// Every word starting with `prefix` (the prefix itself included), sorted.
  std::vector<std::string> prefix_search(std::string_view prefix) const;

  const Trie& trie() const { return trie_; }
  const LexiconEntry& entry(std::int32_t index) const {
    return entries_[static_cast<std::size_t>(index)];
  }

  /// Number of lookups served so far (contains/count/prefix_search and trie
  /// access through `note_lookup`).
  std::size_t lookups() const { return lookups_.load(std::memory_order_relaxed); }
  void note_lookup() const { lookups_.fetch_add(1, std::memory_order_relaxed); }

 private:
  void build();

  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::int32_t> index_;
  Trie trie_;
  mutable std::atomic<std::size_t> lookups_{0};
};

struct LexiconLoad {
  Lexicon lexicon;
  std::vector<std::string> warnings;
};

/// Parses `word<TAB>count` lines; '#' starts a comment line. Uppercase ASCII is
/// folded; words with other non a-z characters are dropped with a warning.
/// Duplicate words have their counts summed. Malformed lines throw ParseError
/// carrying the line number.
LexiconLoad load_lexicon(std::istream& in, std::size_t cap = kDefaultLexiconCap);
LexiconLoad load_lexicon_file(const std::string& path, std::size_t cap = kDefaultLexiconCap);

/// count(word) / sum of counts over `candidates`.
double word_prob(const Lexicon& lex, std::string_view word,
                 std::span<const std::string> candidates);

}  // namespace dusk
