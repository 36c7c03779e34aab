#include "oscn/minhash.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <string>

#include "oscn/errors.hpp"

namespace oscn {

namespace {

void appendLe64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t readLe64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// SHA-256 in counter mode: block j = SHA-256(tag || seed || j), read as four
// little-endian words.
class DrawStream {
 public:
  explicit DrawStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() {
    if (used_ == 4) refill();
    return readLe64(block_.data() + 8 * used_++);
  }

 private:
  void refill() {
    std::string input = "oscn-hash-family";
    appendLe64(input, seed_);
    appendLe64(input, counter_++);
    block_ = sha256(input);
    used_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  Sha256 block_{};
  std::size_t used_ = 4;
};

std::uint64_t computeFingerprint(std::uint64_t seed, const std::vector<HashParams>& params) {
  std::string bytes;
  bytes.reserve(16 * params.size() + 8);
  appendLe64(bytes, seed);
  for (const auto& p : params) {
    appendLe64(bytes, p.multiplier);
    appendLe64(bytes, p.offset);
  }
  return readLe64(sha256(bytes).data());
}

void checkHashCount(std::size_t k) {
  if (k == 0 || k % 64 != 0) {
    throw ConfigError("hash count must be a positive multiple of 64, got " + std::to_string(k));
  }
}

}  // namespace

HashFamily::HashFamily(std::uint64_t seed, std::vector<HashParams> params)
    : seed_(seed), params_(std::move(params)), fingerprint_(computeFingerprint(seed_, params_)) {}

HashFamily HashFamily::make(std::uint64_t seed, std::size_t k) {
  checkHashCount(k);
  DrawStream stream(seed);
  std::vector<HashParams> params(k);
  // Multipliers are odd: with an even multiplier the low bit of a*x + b no
  // longer depends on x, and that bit is the whole signature.
  for (auto& p : params) {
    p.multiplier = stream.next() | 1U;
    p.offset = stream.next();
  }
  return HashFamily(seed, std::move(params));
}

HashFamily HashFamily::fromParams(std::uint64_t seed, std::vector<HashParams> params) {
  checkHashCount(params.size());
  for (const auto& p : params) {
    if (p.multiplier == 0) throw ConfigError("hash multiplier must be nonzero");
  }
  return HashFamily(seed, std::move(params));
}

std::int32_t javaStringHash(std::string_view utf8) {
  std::uint32_t h = 0;
  auto mix = [&h](std::uint32_t unit) { h = h * 31U + unit; };
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto lead = static_cast<unsigned char>(utf8[i]);
    std::uint32_t cp = lead;
    std::size_t len = 1;
    if (lead >= 0xF0) {
      cp = lead & 0x07U;
      len = 4;
    } else if (lead >= 0xE0) {
      cp = lead & 0x0FU;
      len = 3;
    } else if (lead >= 0xC0) {
      cp = lead & 0x1FU;
      len = 2;
    }
    if (i + len > utf8.size()) {
      // Truncated sequence; callers pass decoded text, so this only guards bounds.
      mix(0xFFFD);
      break;
    }
    for (std::size_t j = 1; j < len; ++j) {
      cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + j]) & 0x3FU);
    }
    if (cp >= 0x10000) {
      cp -= 0x10000;
      mix(0xD800 + (cp >> 10));
      mix(0xDC00 + (cp & 0x3FF));
    } else {
      mix(cp);
    }
    i += len;
  }
  return static_cast<std::int32_t>(h);
}

std::uint64_t baseHash(std::int32_t ha, std::int32_t hb, std::int32_t hc, std::uint64_t occ) {
  constexpr std::uint64_t kMul = 65537;
  auto widen = [](std::int32_t v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); };
  std::uint64_t h = occ * kMul + widen(ha);
  h = h * kMul + widen(hb);
  h = h * kMul + widen(hc);
  return h;
}

std::uint64_t baseHash(const Trigram& t) {
  return baseHash(javaStringHash(t.a), javaStringHash(t.b), javaStringHash(t.c), t.occ);
}

std::vector<std::uint64_t> baseHashes(const TrigramSet& tg) {
  std::vector<std::uint64_t> out;
  out.reserve(tg.size());
  for (const auto& t : tg) out.push_back(baseHash(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> minHashes(std::span<const std::uint64_t> bases, const HashFamily& family) {
  const std::size_t k = family.size();
  std::vector<std::uint64_t> mins(k, std::numeric_limits<std::uint64_t>::max());
  std::vector<std::uint64_t> mul(k);
  std::vector<std::uint64_t> add(k);
  for (std::size_t i = 0; i < k; ++i) {
    mul[i] = family.params()[i].multiplier;
    add[i] = family.params()[i].offset;
  }
  for (std::uint64_t x : bases) {
    for (std::size_t i = 0; i < k; ++i) {
      mins[i] = std::min(mins[i], mul[i] * x + add[i]);
    }
  }
  return mins;
}

FileSignature signatureFromBases(std::span<const std::uint64_t> bases, const HashFamily& family,
                                 const Digest& digest) {
  FileSignature sig;
  sig.words.assign(family.words(), 0);
  sig.trigramCount = bases.size();
  sig.digest = digest;
  sig.family = family.fingerprint();
  if (bases.empty()) return sig;
  const auto mins = minHashes(bases, family);
  for (std::size_t i = 0; i < mins.size(); ++i) {
    sig.words[i / 64] |= (mins[i] & 1U) << (i % 64);
  }
  return sig;
}

FileSignature signature(const TrigramSet& tg, const HashFamily& family, std::string_view rawBytes) {
  const auto bases = baseHashes(tg);
  return signatureFromBases(bases, family, sha1(rawBytes));
}

double observedAgreement(const FileSignature& s1, const FileSignature& s2) {
  if (s1.family != s2.family || s1.words.size() != s2.words.size()) {
    throw SignatureMismatch("signatures come from different hash families");
  }
  std::size_t differing = 0;
  for (std::size_t w = 0; w < s1.words.size(); ++w) {
    differing += static_cast<std::size_t>(std::popcount(s1.words[w] ^ s2.words[w]));
  }
  return 1.0 - static_cast<double>(differing) / static_cast<double>(s1.bitCount());
}

double simE(const FileSignature& s1, const FileSignature& s2) {
  return std::max(0.0, (observedAgreement(s1, s2) - 0.5) * 2.0);
}

}  // namespace oscn
