#include "oscn/ranking.hpp"

#include <algorithm>

namespace oscn {

bool dominates(std::span<const double> s1, std::size_t size1, std::span<const double> s2,
               std::size_t size2) {
  bool allGreaterOrEqual = true;
  bool someGreater = false;
  bool allEqual = true;
  for (std::size_t q = 0; q < s1.size(); ++q) {
    if (s1[q] < s2[q]) allGreaterOrEqual = false;
    if (s1[q] > s2[q]) someGreater = true;
    if (s1[q] != s2[q]) allEqual = false;
  }
  return (allGreaterOrEqual && someGreater) || (allEqual && size1 < size2);
}

bool dominates(const ComponentScore& c1, const ComponentScore& c2) {
  return dominates(c1.perFile, c1.fileCount, c2.perFile, c2.fileCount);
}

std::vector<ComponentScore> scoreComponents(const SearchOutcome& outcome, std::size_t queryCount,
                                            const DatabaseView& view) {
  std::vector<ComponentScore> scores;
  scores.reserve(outcome.components.size());
  for (ComponentId id : outcome.components) {
    const Component& c = view.database().component(id);
    ComponentScore score{id, c.name, 0.0, c.fileCount(), std::vector<double>(queryCount, 0.0)};
    for (std::size_t q = 0; q < queryCount; ++q) {
      score.perFile[q] = outcome.similarity(q, id);
      score.total += score.perFile[q];
    }
    scores.push_back(std::move(score));
  }
  return scores;
}

std::vector<ComponentScore> selectRepresentatives(std::span<const ComponentScore> scores) {
  if (scores.empty()) return {};
  // Query files that matched nothing are zero in every vector and cannot
  // change the relation, so compare on the remaining columns only.
  const std::size_t queryCount = scores.front().perFile.size();
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < queryCount; ++q) {
    if (std::any_of(scores.begin(), scores.end(), [q](const ComponentScore& s) { return s.perFile[q] != 0.0; })) {
      active.push_back(q);
    }
  }
  std::vector<std::vector<double>> packed;
  packed.reserve(scores.size());
  for (const auto& s : scores) {
    std::vector<double> v;
    v.reserve(active.size());
    for (std::size_t q : active) v.push_back(s.perFile[q]);
    packed.push_back(std::move(v));
  }

  std::vector<ComponentScore> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < scores.size() && !dominated; ++j) {
      dominated = j != i && dominates(packed[j], scores[j].fileCount, packed[i], scores[i].fileCount);
    }
    if (!dominated) out.push_back(scores[i]);
  }
  return out;
}

void rank(std::vector<ComponentScore>& scores) {
  std::stable_sort(scores.begin(), scores.end(), [](const ComponentScore& x, const ComponentScore& y) {
    if (x.total != y.total) return x.total > y.total;
    if (x.fileCount != y.fileCount) return x.fileCount < y.fileCount;
    return x.name < y.name;
  });
}

ComponentReport buildReport(const SearchOutcome& outcome, const QuerySet& query, const DatabaseView& view,
                            std::size_t topN) {
  ComponentReport report;
  report.queryFileCount = query.size();
  report.stats = outcome.stats;
  report.fullList = scoreComponents(outcome, query.size(), view);
  rank(report.fullList);
  report.filteredList = selectRepresentatives(report.fullList);

  const std::size_t columns = std::min(topN, report.filteredList.size());
  SimilarityTable& table = report.table;
  for (std::size_t c = 0; c < columns; ++c) {
    table.components.push_back(report.filteredList[c].name);
    table.totals.push_back(report.filteredList[c].total);
    table.sizes.push_back(report.filteredList[c].fileCount);
  }
  for (std::size_t q = 0; q < query.size(); ++q) {
    table.queryFiles.push_back(query.files[q].path);
    std::vector<TableCell> row;
    for (std::size_t c = 0; c < columns; ++c) {
      auto it = outcome.best.find({q, report.filteredList[c].component});
      if (it == outcome.best.end()) {
        row.push_back(TableCell{});
      } else {
        row.push_back(TableCell{it->second.similarity, it->second.path});
      }
    }
    table.cells.push_back(std::move(row));

    auto first = outcome.best.lower_bound({q, 0});
    if (first == outcome.best.end() || first->first.first != q) report.unmatched.push_back(query.files[q].path);
  }
  return report;
}

}  // namespace oscn
