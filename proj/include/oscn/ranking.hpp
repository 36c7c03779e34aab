#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscn/corpus.hpp"
#include "oscn/search.hpp"

namespace oscn {

inline constexpr std::size_t kDefaultTopN = 5;

struct ComponentScore {
  ComponentId component = 0;
  std::string name;
  double total = 0.0;  // S_Q(C)
  std::size_t fileCount = 0;  // |C|
  std::vector<double> perFile;  // S(q, C) for every query file, zeros included
};

/// C1 ⊃_S C2: at least as similar on every query file and strictly better on
/// one, or equal everywhere and smaller. Vectors must have equal length.
bool dominates(std::span<const double> s1, std::size_t size1, std::span<const double> s2,
               std::size_t size2);
bool dominates(const ComponentScore& c1, const ComponentScore& c2);

/// One score per component of R, with perFile and S_Q filled in.
std::vector<ComponentScore> scoreComponents(const SearchOutcome& outcome, std::size_t queryCount,
                                            const DatabaseView& view);

/// The members of `scores` that no other member dominates, in input order.
std::vector<ComponentScore> selectRepresentatives(std::span<const ComponentScore> scores);

/// S_Q descending, then |C| ascending, then name ascending.
void rank(std::vector<ComponentScore>& scores);

struct TableCell {
  double similarity = 0.0;
  std::optional<std::string> path;  // matched corpus path, absent for zero cells
};

struct SimilarityTable {
  std::vector<std::string> components;  // column headers
  std::vector<std::string> queryFiles;  // row headers
  std::vector<std::vector<TableCell>> cells;  // [row][column]
  std::vector<double> totals;  // S_Q(C) per column
  std::vector<std::size_t> sizes;  // |C| per column
};

struct ComponentReport {
  std::vector<ComponentScore> fullList;  // R
  std::vector<ComponentScore> filteredList;  // R_S
  SimilarityTable table;  // top-N of R_S
  std::vector<std::string> unmatched;
  std::size_t queryFileCount = 0;
  SearchStats stats;
};

ComponentReport buildReport(const SearchOutcome& outcome, const QuerySet& query, const DatabaseView& view,
                            std::size_t topN = kDefaultTopN);

}  // namespace oscn
