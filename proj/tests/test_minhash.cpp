#include <gtest/gtest.h>

#include <algorithm>
#include <climits>
#include <random>

#include "oscn/errors.hpp"
#include "oscn/minhash.hpp"

namespace oscn {
namespace {

TEST(HashFamily, SameSeedSameParams) {
  const HashFamily f1 = HashFamily::make(42, 2048);
  const HashFamily f2 = HashFamily::make(42, 2048);
  EXPECT_EQ(f1, f2);
  EXPECT_EQ(f1.fingerprint(), f2.fingerprint());
  EXPECT_EQ(f1.size(), 2048U);
  EXPECT_EQ(f1.words(), 32U);
}

TEST(HashFamily, DifferentSeedDifferentParams) {
  const HashFamily f1 = HashFamily::make(1, 64);
  const HashFamily f2 = HashFamily::make(2, 64);
  EXPECT_FALSE(std::equal(f1.params().begin(), f1.params().end(), f2.params().begin()));
  EXPECT_NE(f1.fingerprint(), f2.fingerprint());
}

TEST(HashFamily, PrefixOfLargerFamilyMatches) {
  const HashFamily small = HashFamily::make(9, 64);
  const HashFamily large = HashFamily::make(9, 128);
  EXPECT_TRUE(std::equal(small.params().begin(), small.params().end(), large.params().begin()));
}

TEST(HashFamily, MultipliersAreOdd) {
  const HashFamily f = HashFamily::make(3, 2048);
  for (const auto& p : f.params()) EXPECT_EQ(p.multiplier & 1U, 1U);
}

TEST(HashFamily, RejectsBadCounts) {
  EXPECT_THROW(HashFamily::make(1, 63), ConfigError);
  EXPECT_THROW(HashFamily::make(1, 0), ConfigError);
  EXPECT_THROW(HashFamily::fromParams(1, std::vector<HashParams>(64, HashParams{0, 1})), ConfigError);
}

TEST(JavaStringHash, KnownValues) {
  EXPECT_EQ(javaStringHash(""), 0);
  EXPECT_EQ(javaStringHash("a"), 97);
  EXPECT_EQ(javaStringHash("hello"), 99162322);
  EXPECT_EQ(javaStringHash("polygenelubricants"), INT_MIN);
  EXPECT_EQ(javaStringHash("while"), 113101617);
  // U+1F600 is a surrogate pair in UTF-16.
  EXPECT_EQ(javaStringHash("\xF0\x9F\x98\x80"), 1772899);
}

TEST(BaseHash, Values) {
  EXPECT_EQ(baseHash(Trigram{"", "", "", 0}), 0U);
  // ((65537 + 97) * 65537 + 97) * 65537 + 97
  EXPECT_EQ(baseHash(Trigram{"a", "a", "a", 1}), 281904492708132ULL);
  // INT_MIN must be sign-extended before the 64-bit arithmetic.
  EXPECT_EQ(baseHash(Trigram{"polygenelubricants", "x", "", 1}), 9223372047600255097ULL);
}

TEST(BaseHash, OccurrenceIndexShiftsByCube) {
  const std::uint64_t one = baseHash(Trigram{"a", "b", "c", 1});
  const std::uint64_t two = baseHash(Trigram{"a", "b", "c", 2});
  EXPECT_EQ(two - one, 281487861809153ULL);  // 65537^3 mod 2^64
}

TEST(Signature, IdenticalInputsGiveIdenticalSignatures) {
  const HashFamily f = HashFamily::make(5, 2048);
  const TrigramSet tg = trigrams(tokenize("int x = y + 1;", Language::CCpp));
  const FileSignature s1 = signature(tg, f, "int x = y + 1;");
  const FileSignature s2 = signature(tg, f, "int x = y + 1;");
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(simE(s1, s2), 1.0);
  EXPECT_EQ(s1.trigramCount, 9U);
  EXPECT_EQ(s1.digest, sha1("int x = y + 1;"));
}

TEST(Signature, LeastSignificantBitOfTheMinimum) {
  // Identity hashes make the minimum the smallest base value itself.
  const HashFamily identity = HashFamily::fromParams(0, std::vector<HashParams>(64, HashParams{1, 0}));
  const std::vector<std::uint64_t> odd = {7, 12};
  const std::vector<std::uint64_t> even = {8, 13};
  EXPECT_EQ(signatureFromBases(odd, identity, {}).words[0], ~std::uint64_t{0});
  EXPECT_EQ(signatureFromBases(even, identity, {}).words[0], 0U);
}

TEST(Signature, MinimumUsesUnsignedComparison) {
  // 2^63 + 1 is negative as a signed value but larger than 2 unsigned.
  const HashFamily identity = HashFamily::fromParams(0, std::vector<HashParams>(64, HashParams{1, 0}));
  const std::vector<std::uint64_t> bases = {(std::uint64_t{1} << 63) + 1, 2};
  EXPECT_EQ(signatureFromBases(bases, identity, {}).words[0], 0U);
}

TEST(Signature, SingletonSetBitsFollowTheHashDirectly) {
  const HashFamily f = HashFamily::make(77, 256);
  const Trigram t{"x", "y", "z", 1};
  const FileSignature sig = signature(TrigramSet({t}), f, "xyz");
  const std::uint64_t base = baseHash(t);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& p = f.params()[i];
    EXPECT_EQ(sig.bit(i), ((p.multiplier * base + p.offset) & 1U) == 1U) << i;
  }
}

TEST(Signature, EmptySetGivesZeroBits) {
  const HashFamily f = HashFamily::make(5, 128);
  const FileSignature sig = signature(TrigramSet{}, f, "");
  EXPECT_EQ(sig.trigramCount, 0U);
  for (auto w : sig.words) EXPECT_EQ(w, 0U);
}

FileSignature withFlippedBits(const FileSignature& s, std::size_t count) {
  FileSignature out = s;
  for (std::size_t i = 0; i < count; ++i) out.words[i / 64] ^= std::uint64_t{1} << (i % 64);
  return out;
}

TEST(SimE, EstimatorArithmetic) {
  const HashFamily f = HashFamily::make(5, 2048);
  const FileSignature s = signature(trigrams(tokenize("a b c", Language::CCpp)), f, "a b c");
  EXPECT_EQ(simE(s, withFlippedBits(s, 1024)), 0.0);
  EXPECT_EQ(observedAgreement(s, withFlippedBits(s, 256)), 0.875);
  EXPECT_EQ(simE(s, withFlippedBits(s, 256)), 0.75);
  // More than half differing would be negative; it is clamped.
  EXPECT_EQ(simE(s, withFlippedBits(s, 2048)), 0.0);
}

TEST(SimE, FamilyMismatchIsRejected) {
  const FileSignature a = signature(TrigramSet{}, HashFamily::make(1, 64), "");
  const FileSignature b = signature(TrigramSet{}, HashFamily::make(2, 64), "");
  const FileSignature c = signature(TrigramSet{}, HashFamily::make(1, 128), "");
  EXPECT_THROW(simE(a, b), SignatureMismatch);
  EXPECT_THROW(simE(a, c), SignatureMismatch);
}

// Two random base-value sets with |A ∩ B| = shared and |A \ B| = |B \ A| = own.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> pairWithOverlap(std::mt19937_64& rng,
                                                                                  std::size_t shared,
                                                                                  std::size_t own) {
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  for (std::size_t i = 0; i < shared; ++i) {
    const auto v = rng();
    a.push_back(v);
    b.push_back(v);
  }
  for (std::size_t i = 0; i < own; ++i) a.push_back(rng());
  for (std::size_t i = 0; i < own; ++i) b.push_back(rng());
  return {a, b};
}

TEST(SimEProperties, SymmetricAndBounded) {
  std::mt19937_64 rng(21);
  const HashFamily f = HashFamily::make(21, 512);
  for (int trial = 0; trial < 200; ++trial) {
    auto [a, b] = pairWithOverlap(rng, trial % 20, 10);
    const auto sa = signatureFromBases(a, f, {});
    const auto sb = signatureFromBases(b, f, {});
    EXPECT_EQ(simE(sa, sb), simE(sb, sa));
    EXPECT_GE(simE(sa, sb), 0.0);
    EXPECT_LE(simE(sa, sb), 1.0);
  }
}

TEST(SimEProperties, MeanEstimateTracksTrueJaccard) {
  // 10^4 pairs at each similarity; the mean must land within 0.02.
  std::mt19937_64 rng(22);
  const HashFamily f = HashFamily::make(22, 2048);
  struct Case {
    std::size_t shared;
    std::size_t own;
    double jaccard;
  };
  for (const Case c : {Case{10, 5, 0.5}, Case{16, 2, 0.8}}) {
    double sum = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      auto [a, b] = pairWithOverlap(rng, c.shared, c.own);
      sum += simE(signatureFromBases(a, f, {}), signatureFromBases(b, f, {}));
    }
    EXPECT_NEAR(sum / trials, c.jaccard, 0.02) << "J=" << c.jaccard;
  }
}

}  // namespace
}  // namespace oscn
