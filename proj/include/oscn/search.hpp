#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscn/corpus.hpp"
#include "oscn/lexer.hpp"
#include "oscn/minhash.hpp"

namespace oscn {

inline constexpr double kDefaultThreshold = 0.9;
inline constexpr double kDefaultMargin = 0.1;

struct SearchParams {
  double threshold = kDefaultThreshold;  // th, in (0, 1]
  double margin = kDefaultMargin;        // m >= 0
  unsigned threads = 0;                  // 0 = hardware concurrency
  /// Exact test re-derives trigrams from stored token streams instead of
  /// comparing base hashes; requires a database built with tokens.
  bool auditTokens = false;

  /// Throws ConfigError when th is outside (0, 1] or m is negative.
  void validate() const;
};

struct QueryFile {
  std::string path;
  TokenSequence tokens;
  TrigramSet trigrams;
  std::vector<std::uint64_t> trigramHashes;  // sorted base hashes of `trigrams`
  FileSignature signature;

  static QueryFile build(const SourceFile& file, const HashFamily& family);
};

/// The files being analyzed. Files without a lexer are not part of the query.
struct QuerySet {
  std::vector<QueryFile> files;
  std::vector<std::string> skipped;

  std::size_t size() const { return files.size(); }

  static QuerySet build(std::vector<SourceFile> files, const HashFamily& family, unsigned threads = 0);
};

/// Best-matching corpus file for one (query file, component) pair.
struct Match {
  FileId file = 0;
  std::string path;  // path of the file within the component
  double similarity = 0.0;
  friend bool operator==(const Match&, const Match&) = default;
};

struct SearchStats {
  std::uint64_t pairsConsidered = 0;
  std::uint64_t sizePruned = 0;
  std::uint64_t estimatePruned = 0;
  std::uint64_t exactComputed = 0;
  std::uint64_t accepted = 0;

  SearchStats& operator+=(const SearchStats& o);
  friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

using QueryComponentKey = std::pair<std::size_t, ComponentId>;

struct SearchOutcome {
  std::set<ComponentId> components;  // R
  std::map<QueryComponentKey, Match> best;  // S(q, C) > 0 entries with their evidence
  SearchStats stats;

  /// S(q, C); zero when C has no qualifying file for q.
  double similarity(std::size_t query, ComponentId component) const;
};

/// Exact multiset Jaccard of two sorted base-hash lists.
double hashedJaccard(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y);

/// Every (query file, corpus file) pair goes through the size-ratio prune,
/// the signature-estimate prune (simE >= th - m), and the exact test
/// (sim >= th). Throws SignatureMismatch when the query was signed with a
/// different hash family.
SearchOutcome componentSearch(const QuerySet& query, const DatabaseView& view, const SearchParams& params);

/// Exact content-digest matching; S(q, C) is 1 when C owns a byte-identical file.
SearchOutcome baselineSearch(const QuerySet& query, const DatabaseView& view);

struct SimilarFile {
  FileId file = 0;
  std::vector<Owner> owners;  // visible owners only
  double similarity = 0.0;
};

/// Corpus files passing all three filters for one query file, sorted by
/// similarity descending then fileId ascending.
std::vector<SimilarFile> findSimilarFiles(const QueryFile& q, const DatabaseView& view,
                                          const SearchParams& params, SearchStats* stats = nullptr);

}  // namespace oscn
