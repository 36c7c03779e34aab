#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oscn {

enum class Language { CCpp, Java, Unknown };

/// Language family from the path's extension (case-insensitive).
Language languageFromPath(std::string_view path);
std::string_view languageName(Language language);

struct SourceFile {
  std::string path;
  Language language = Language::Unknown;
  std::string content;

  static SourceFile fromBytes(std::string path, std::string content) {
    Language language = languageFromPath(path);
    return SourceFile{std::move(path), language, std::move(content)};
  }
};

/// Tokens of one file in source order, comments and whitespace removed.
struct TokenSequence {
  std::vector<std::string> tokens;
  /// Set when the content was not valid UTF-8 and invalid sequences were replaced.
  bool lossyDecoded = false;

  std::size_t count() const { return tokens.size(); }
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Replaces each maximal invalid UTF-8 subsequence with U+FFFD.
std::string decodeUtf8Lossy(std::string_view bytes, bool* replaced = nullptr);

/// Throws UnsupportedLanguage for Language::Unknown.
TokenSequence tokenize(const SourceFile& file);
TokenSequence tokenize(std::string_view content, Language language);

/// The reserved padding token marking the beginning and end of a file. Real
/// tokens are never empty, so the empty string cannot collide with one.
inline constexpr std::string_view kSentinel{};

/// A token triple plus its 1-based occurrence index within one file. The
/// index turns the trigram multiset of a file into a set.
struct Trigram {
  std::string a;
  std::string b;
  std::string c;
  std::uint32_t occ = 1;

  friend auto operator<=>(const Trigram&, const Trigram&) = default;
  friend bool operator==(const Trigram&, const Trigram&) = default;
};

/// Occurrence-indexed trigram set of a file, kept sorted.
class TrigramSet {
 public:
  TrigramSet() = default;
  /// Takes arbitrary elements; sorts and drops duplicates.
  explicit TrigramSet(std::vector<Trigram> elements);

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const Trigram& t) const;
  const std::vector<Trigram>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const TrigramSet&, const TrigramSet&) = default;

 private:
  std::vector<Trigram> elements_;
};

/// Pads with two sentinels per side and slides a width-3 window.
/// t >= 1 tokens yield t + 2 trigrams; no tokens yield the empty set.
TrigramSet trigrams(const TokenSequence& seq);

std::size_t intersectionSize(const TrigramSet& x, const TrigramSet& y);

/// |x ∩ y| / |x ∪ y|; two empty sets compare as identical (1.0).
double jaccard(const TrigramSet& x, const TrigramSet& y);

}  // namespace oscn
