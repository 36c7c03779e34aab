#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "oscn/digest.hpp"
#include "oscn/lexer.hpp"

namespace oscn {

inline constexpr std::size_t kDefaultHashCount = 2048;
inline constexpr std::uint64_t kDefaultSeed = 0x6f73636e2d763031ULL;

/// One hash function h(x) = multiplier * x + offset over wrapping 64-bit integers.
struct HashParams {
  std::uint64_t multiplier = 1;
  std::uint64_t offset = 0;
  friend bool operator==(const HashParams&, const HashParams&) = default;
};

/// k linear hash functions drawn deterministically from a seed.
class HashFamily {
 public:
  /// Throws ConfigError unless k > 0 and k is a multiple of 64.
  static HashFamily make(std::uint64_t seed, std::size_t k = kDefaultHashCount);
  /// Rebuilds a family from persisted parameters.
  static HashFamily fromParams(std::uint64_t seed, std::vector<HashParams> params);

  std::size_t size() const { return params_.size(); }
  std::size_t words() const { return params_.size() / 64; }
  std::uint64_t seed() const { return seed_; }
  std::span<const HashParams> params() const { return params_; }
  /// Digest of the parameters; equal fingerprints mean interchangeable families.
  std::uint64_t fingerprint() const { return fingerprint_; }

  friend bool operator==(const HashFamily& x, const HashFamily& y) {
    return x.seed_ == y.seed_ && x.params_ == y.params_;
  }

 private:
  HashFamily(std::uint64_t seed, std::vector<HashParams> params);

  std::uint64_t seed_ = 0;
  std::vector<HashParams> params_;
  std::uint64_t fingerprint_ = 0;
};

/// Java's String.hashCode: s[0]*31^(n-1) + ... + s[n-1] over UTF-16 code
/// units with wrapping 32-bit arithmetic. The input is UTF-8.
std::int32_t javaStringHash(std::string_view utf8);

/// ((((occ * 65537) + H(a)) * 65537 + H(b)) * 65537 + H(c)) in wrapping
/// 64-bit arithmetic, each H sign-extended to 64 bits.
std::uint64_t baseHash(std::int32_t ha, std::int32_t hb, std::int32_t hc, std::uint64_t occ);
std::uint64_t baseHash(const Trigram& t);

/// baseHash of every trigram, sorted ascending.
std::vector<std::uint64_t> baseHashes(const TrigramSet& tg);

/// b = 1 minwise signature of one file.
struct FileSignature {
  std::vector<std::uint64_t> words;  // bit i of the signature is bit (i % 64) of words[i / 64]
  std::uint64_t trigramCount = 0;
  Digest digest{};
  std::uint64_t family = 0;  // HashFamily::fingerprint() of the family that built it

  std::size_t bitCount() const { return words.size() * 64; }
  bool bit(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1U; }

  friend bool operator==(const FileSignature&, const FileSignature&) = default;
};

/// Per-function minimum of h_i over the base values, unsigned comparison.
/// Empty input yields all-ones (no minimum exists).
std::vector<std::uint64_t> minHashes(std::span<const std::uint64_t> bases, const HashFamily& family);

FileSignature signatureFromBases(std::span<const std::uint64_t> bases, const HashFamily& family,
                                 const Digest& digest);
FileSignature signature(const TrigramSet& tg, const HashFamily& family, std::string_view rawBytes);

/// Fraction of agreeing bits.
double observedAgreement(const FileSignature& s1, const FileSignature& s2);

/// max(0, (P_o - 1/2) * 2). Throws SignatureMismatch when the families differ.
double simE(const FileSignature& s1, const FileSignature& s2);

}  // namespace oscn
