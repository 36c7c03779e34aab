#include "oscn/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "oscn/errors.hpp"

namespace oscn {

namespace {

std::string lowerExtension(std::string_view path) {
  auto slash = path.find_last_of("/\\");
  auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  std::string ext(name.substr(dot));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

// Longest operators first within each table; the scanner tries them in order.
constexpr std::array<std::string_view, 27> kCppOperators = {
    ">>=", "<<=", "<=>", "->*", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "::", ".*", "##"};

constexpr std::array<std::string_view, 25> kJavaOperators = {
    ">>>=", ">>>", "<<=", ">>=", "...", "->", "::", "++", "--", "<<", ">>", "<=", ">=",
    "==",   "!=",  "&&",  "||",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^="};

bool isIdentStart(unsigned char ch) {
  return std::isalpha(ch) || ch == '_' || ch == '$' || ch >= 0x80;
}

bool isIdentChar(unsigned char ch) { return isIdentStart(ch) || std::isdigit(ch); }

bool isSpace(unsigned char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

class Scanner {
 public:
  Scanner(std::string_view text, Language language) : text_(text), language_(language) {}

  std::vector<std::string> run() {
    while (true) {
      skipTrivia();
      if (pos_ >= text_.size()) break;
      tokens_.emplace_back(next());
    }
    return std::move(tokens_);
  }

 private:
  bool cpp() const { return language_ == Language::CCpp; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  bool startsWith(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void skipTrivia() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (isSpace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (cpp() && ch == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
        pos_ += peek(1) == '\n' ? 2 : 3;  // line splice
      } else if (startsWith("//")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          if (cpp() && text_[pos_] == '\\' && peek(1) == '\n') ++pos_;
          ++pos_;
        }
      } else if (startsWith("/*")) {
        auto close = text_.find("*/", pos_ + 2);
        pos_ = close == std::string_view::npos ? text_.size() : close + 2;
      } else {
        break;
      }
    }
  }

  std::string next() {
    const std::size_t start = pos_;
    const auto ch = static_cast<unsigned char>(text_[pos_]);

    if (!cpp() && startsWith("\"\"\"")) {
      auto close = text_.find("\"\"\"", pos_ + 3);
      pos_ = close == std::string_view::npos ? text_.size() : close + 3;
      return std::string(text_.substr(start, pos_ - start));
    }
    if (ch == '"' || ch == '\'') {
      scanQuoted(static_cast<char>(ch));
      return std::string(text_.substr(start, pos_ - start));
    }
    if (std::isdigit(ch) || (ch == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      scanNumber();
      return std::string(text_.substr(start, pos_ - start));
    }
    if (isIdentStart(ch)) {
      while (pos_ < text_.size() && isIdentChar(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (cpp()) scanPrefixedLiteral(text_.substr(start, pos_ - start));
      return std::string(text_.substr(start, pos_ - start));
    }
    auto matchOperator = [&](const auto& table) -> std::size_t {
      for (std::string_view op : table) {
        if (startsWith(op)) return op.size();
      }
      return 0;
    };
    std::size_t len = cpp() ? matchOperator(kCppOperators) : matchOperator(kJavaOperators);
    if (len == 0) len = utf8Length(ch);
    pos_ = std::min(text_.size(), pos_ + len);
    return std::string(text_.substr(start, pos_ - start));
  }

  static std::size_t utf8Length(unsigned char lead) {
    if (lead >= 0xF0) return 4;
    if (lead >= 0xE0) return 3;
    if (lead >= 0xC0) return 2;
    return 1;
  }

  // An unterminated literal ends at the end of its line.
  void scanQuoted(char quote) {
    ++pos_;
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '\\' && pos_ + 1 < text_.size()) {
        pos_ += 2;
      } else if (ch == quote) {
        ++pos_;
        return;
      } else if (ch == '\n') {
        return;
      } else {
        ++pos_;
      }
    }
  }

  void scanNumber() {
    while (pos_ < text_.size()) {
      const auto ch = static_cast<unsigned char>(text_[pos_]);
      const auto nextCh = static_cast<unsigned char>(peek(1));
      if ((ch == '+' || ch == '-') && pos_ > 0) {
        const char prev = static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_ - 1])));
        if (prev == 'e' || prev == 'p') {
          ++pos_;
          continue;
        }
        return;
      }
      if (std::isalnum(ch) || ch == '_' || ch == '.') {
        ++pos_;
      } else if (cpp() && ch == '\'' && std::isalnum(nextCh)) {
        ++pos_;  // digit separator
      } else {
        return;
      }
    }
  }

  // Called right after an identifier; extends it over an encoding prefix
  // (L"..", u8'..') or a raw string (R"delim(...)delim").
  void scanPrefixedLiteral(std::string_view ident) {
    const char nextCh = peek();
    if (nextCh != '"' && nextCh != '\'') return;
    static constexpr std::array<std::string_view, 4> kEncoding = {"L", "u", "U", "u8"};
    static constexpr std::array<std::string_view, 5> kRaw = {"R", "LR", "uR", "UR", "u8R"};
    if (std::find(kEncoding.begin(), kEncoding.end(), ident) != kEncoding.end()) {
      scanQuoted(nextCh);
      return;
    }
    if (nextCh != '"' || std::find(kRaw.begin(), kRaw.end(), ident) == kRaw.end()) return;
    const auto open = text_.find('(', pos_ + 1);
    if (open == std::string_view::npos || open - pos_ - 1 > 16) return;
    const std::string_view delim = text_.substr(pos_ + 1, open - pos_ - 1);
    if (delim.find_first_of(" \t\n\\)\"") != std::string_view::npos) return;
    std::string terminator = ")";
    terminator.append(delim).push_back('"');
    const auto close = text_.find(terminator, open + 1);
    pos_ = close == std::string_view::npos ? text_.size() : close + terminator.size();
  }

  std::string_view text_;
  Language language_;
  std::size_t pos_ = 0;
  std::vector<std::string> tokens_;
};

}  // namespace

Language languageFromPath(std::string_view path) {
  const std::string ext = lowerExtension(path);
  static const std::array<std::string_view, 8> kCpp = {".c",   ".h",  ".cc",  ".cpp",
                                                       ".cxx", ".hh", ".hpp", ".hxx"};
  if (std::find(kCpp.begin(), kCpp.end(), ext) != kCpp.end()) return Language::CCpp;
  if (ext == ".java") return Language::Java;
  return Language::Unknown;
}

std::string_view languageName(Language language) {
  switch (language) {
    case Language::CCpp:
      return "C_CPP";
    case Language::Java:
      return "JAVA";
    case Language::Unknown:
      break;
  }
  return "UNKNOWN";
}

std::string decodeUtf8Lossy(std::string_view bytes, bool* replaced) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  bool any = false;
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  auto byteAt = [&](std::size_t j) { return static_cast<unsigned char>(bytes[j]); };
  while (i < n) {
    const unsigned char lead = byteAt(i);
    if (lead < 0x80) {
      out.push_back(static_cast<char>(lead));
      ++i;
      continue;
    }
    std::size_t need = 0;
    unsigned char lo = 0x80;
    unsigned char hi = 0xBF;
    if (lead >= 0xC2 && lead <= 0xDF) {
      need = 1;
    } else if (lead >= 0xE0 && lead <= 0xEF) {
      need = 2;
      if (lead == 0xE0) lo = 0xA0;
      if (lead == 0xED) hi = 0x9F;
    } else if (lead >= 0xF0 && lead <= 0xF4) {
      need = 3;
      if (lead == 0xF0) lo = 0x90;
      if (lead == 0xF4) hi = 0x8F;
    }
    if (need == 0) {
      out.append(kReplacement);
      any = true;
      ++i;
      continue;
    }
    // Accept the longest valid prefix; the second byte has a narrowed range.
    std::size_t j = i + 1;
    std::size_t got = 0;
    while (got < need && j < n) {
      const unsigned char cont = byteAt(j);
      const bool ok = got == 0 ? (cont >= lo && cont <= hi) : (cont >= 0x80 && cont <= 0xBF);
      if (!ok) break;
      ++got;
      ++j;
    }
    if (got == need) {
      out.append(bytes.substr(i, j - i));
    } else {
      out.append(kReplacement);
      any = true;
    }
    i = j;
  }
  if (replaced != nullptr) *replaced = any;
  return out;
}

TokenSequence tokenize(std::string_view content, Language language) {
  if (language == Language::Unknown) {
    throw UnsupportedLanguage("no lexer for this file type");
  }
  TokenSequence seq;
  const std::string text = decodeUtf8Lossy(content, &seq.lossyDecoded);
  seq.tokens = Scanner(text, language).run();
  return seq;
}

TokenSequence tokenize(const SourceFile& file) {
  if (file.language == Language::Unknown) {
    throw UnsupportedLanguage("no lexer for file: " + file.path);
  }
  return tokenize(file.content, file.language);
}

TrigramSet::TrigramSet(std::vector<Trigram> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool TrigramSet::contains(const Trigram& t) const {
  return std::binary_search(elements_.begin(), elements_.end(), t);
}

TrigramSet trigrams(const TokenSequence& seq) {
  if (seq.tokens.empty()) return {};
  std::vector<std::string_view> padded;
  padded.reserve(seq.tokens.size() + 4);
  padded.insert(padded.end(), 2, kSentinel);
  for (const auto& token : seq.tokens) padded.emplace_back(token);
  padded.insert(padded.end(), 2, kSentinel);

  using Key = std::array<std::string_view, 3>;
  std::map<Key, std::uint32_t> seen;
  std::vector<Trigram> out;
  out.reserve(padded.size() - 2);
  for (std::size_t i = 0; i + 2 < padded.size(); ++i) {
    const Key key{padded[i], padded[i + 1], padded[i + 2]};
    const std::uint32_t occ = ++seen[key];
    out.push_back(Trigram{std::string(key[0]), std::string(key[1]), std::string(key[2]), occ});
  }
  return TrigramSet(std::move(out));
}

std::size_t intersectionSize(const TrigramSet& x, const TrigramSet& y) {
  std::size_t count = 0;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double jaccard(const TrigramSet& x, const TrigramSet& y) {
  if (x.empty() && y.empty()) return 1.0;
  const std::size_t common = intersectionSize(x, y);
  const std::size_t unionSize = x.size() + y.size() - common;
  return static_cast<double>(common) / static_cast<double>(unionSize);
}

}  // namespace oscn
