#include "dusk/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

namespace dusk {

Trie::Trie() : nodes_(1) {}

void Trie::insert(std::string_view word, std::int32_t value) {
  std::int32_t node = 0;
  for (char c : word) {
    auto& next = nodes_[static_cast<std::size_t>(node)].next[static_cast<std::size_t>(c - 'a')];
    if (next == kNone) {
      next = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    node = nodes_[static_cast<std::size_t>(node)].next[static_cast<std::size_t>(c - 'a')];
  }
  nodes_[static_cast<std::size_t>(node)].value = value;
}

std::int32_t Trie::child(std::int32_t node, char c) const {
  if (node == kNone || c < 'a' || c > 'z') return kNone;
  return nodes_[static_cast<std::size_t>(node)].next[static_cast<std::size_t>(c - 'a')];
}

std::int32_t Trie::find(std::string_view prefix) const {
  std::int32_t node = 0;
  for (char c : prefix) {
    node = child(node, c);
    if (node == kNone) return kNone;
  }
  return node;
}

void Trie::collect(std::int32_t node, std::vector<std::int32_t>& out) const {
  if (node == kNone) return;
  std::vector<std::int32_t> stack{node};
  while (!stack.empty()) {
    const auto current = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(current)];
    if (n.value != kNone) out.push_back(n.value);
    for (auto it = n.next.rbegin(); it != n.next.rend(); ++it) {
      if (*it != kNone) stack.push_back(*it);
    }
  }
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries, std::size_t cap) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  if (entries_.size() > cap) entries_.resize(cap);
  build();
}

Lexicon::Lexicon(const Lexicon& other)
    : entries_(other.entries_), index_(other.index_), trie_(other.trie_) {}

Lexicon& Lexicon::operator=(const Lexicon& other) {
  entries_ = other.entries_;
  index_ = other.index_;
  trie_ = other.trie_;
  lookups_.store(0);
  return *this;
}

Lexicon::Lexicon(Lexicon&& other) noexcept
    : entries_(std::move(other.entries_)),
      index_(std::move(other.index_)),
      trie_(std::move(other.trie_)) {}

Lexicon& Lexicon::operator=(Lexicon&& other) noexcept {
  entries_ = std::move(other.entries_);
  index_ = std::move(other.index_);
  trie_ = std::move(other.trie_);
  lookups_.store(0);
  return *this;
}

void Lexicon::build() {
  index_.clear();
  trie_ = Trie();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_.emplace(entries_[i].word, static_cast<std::int32_t>(i));
    trie_.insert(entries_[i].word, static_cast<std::int32_t>(i));
  }
}

bool Lexicon::contains(std::string_view word) const {
  note_lookup();
  return index_.contains(std::string(word));
}

std::uint64_t Lexicon::count(std::string_view word) const {
  note_lookup();
  auto it = index_.find(std::string(word));
  return it == index_.end() ? 0 : entries_[static_cast<std::size_t>(it->second)].count;
}

std::vector<std::string> Lexicon::prefix_search(std::string_view prefix) const {
  note_lookup();
  std::vector<std::int32_t> hits;
  trie_.collect(trie_.find(prefix), hits);
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (auto i : hits) out.push_back(entries_[static_cast<std::size_t>(i)].word);
  return out;
}

LexiconLoad load_lexicon(std::istream& in, std::size_t cap) {
  std::map<std::string, std::uint64_t> merged;
  LexiconLoad out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("expected word<TAB>count", line_no);
    }
    std::string word = line.substr(0, tab);
    const std::string_view count_text(line.data() + tab + 1, line.size() - tab - 1);
    std::uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || count == 0) {
      throw ParseError("count must be a positive integer", line_no);
    }
    for (char& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (!is_lowercase_word(word)) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": dropped non a-z word '" +
                             word + "'");
      continue;
    }
    merged[word] += count;
  }
  std::vector<LexiconEntry> entries;
  entries.reserve(merged.size());
  for (auto& [word, count] : merged) entries.push_back({word, count});
  out.lexicon = Lexicon(std::move(entries), cap);
  return out;
}

LexiconLoad load_lexicon_file(const std::string& path, std::size_t cap) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path);
  return load_lexicon(in, cap);
}

double word_prob(const Lexicon& lex, std::string_view word,
                 std::span<const std::string> candidates) {
  if (candidates.empty()) throw Error("word_prob: empty candidate set");
  double total = 0;
  bool found = false;
  for (const auto& c : candidates) {
    total += static_cast<double>(lex.count(c));
    found = found || c == word;
  }
  if (!found) throw Error("word_prob: word is not a candidate");
  if (total <= 0) throw Error("word_prob: candidates are not in the lexicon");
  return static_cast<double>(lex.count(word)) / total;
}

}  // namespace dusk
