#pragma once

// Test-only reference implementations. Nothing here calls into the search
// or minhash code paths it is used to check.

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oscn/lexer.hpp"

namespace oscn::testing {

struct NamedComponent {
  std::string name;
  std::vector<SourceFile> files;
};

/// (query path, component name) -> S(q, C)
using OracleTable = std::map<std::pair<std::string, std::string>, double>;

/// All-pairs exact search over raw sources: lex every file, compare
/// occurrence-indexed trigram tuple sets, keep the max per component.
/// Files without trigrams never qualify.
OracleTable bruteForceSearch(const std::vector<SourceFile>& query, const std::vector<NamedComponent>& corpus,
                             double threshold);

/// Σ_g min(count_x(g), count_y(g)) over raw (non-indexed) trigram multisets.
std::size_t multisetIntersection(const std::vector<std::string>& x, const std::vector<std::string>& y);

struct CorpusShape {
  std::size_t packages = 5;
  std::size_t versionsPerPackage = 4;
  std::size_t filesPerPackage = 12;
  std::size_t minTokens = 20;
  std::size_t maxTokens = 260;
  double shareProbability = 0.1;  // chance a version also bundles another package's file
  std::size_t queryFiles = 15;
};

struct SyntheticCorpus {
  std::vector<NamedComponent> components;
  std::vector<SourceFile> query;
};

/// Random C-like source text of `tokens` tokens drawn from a skewed vocabulary.
std::string randomSource(std::mt19937_64& rng, std::size_t tokens);

/// Applies `edits` random token replacements, insertions or deletions, and
/// re-flows whitespace and comments.
std::string mutateSource(std::mt19937_64& rng, const std::string& source, std::size_t edits);

/// Packages evolving through versions by small edits, with occasional
/// cross-package copies; the query clones one version with light edits,
/// plus a few files of its own.
SyntheticCorpus makeCorpus(std::mt19937_64& rng, const CorpusShape& shape);

}  // namespace oscn::testing
