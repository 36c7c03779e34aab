#include "oscn/search.hpp"

#include <algorithm>
#include <bit>

#include "oscn/errors.hpp"
#include "oscn/parallel.hpp"

namespace oscn {

namespace {

void checkFamily(const QuerySet& query, const DatabaseView& view) {
  const std::uint64_t expected = view.family().fingerprint();
  for (const auto& q : query.files) {
    if (q.signature.family != expected || q.signature.words.size() != view.family().words()) {
      throw SignatureMismatch("query file " + q.path + " was signed with a different hash family");
    }
  }
}

void checkAudit(const SearchParams& params, const DatabaseView& view) {
  if (params.auditTokens && !view.database().storesTokens()) {
    throw ConfigError("token audit requested but the database stores no token streams");
  }
}

// simE without the family check, which callers hoist out of the scan.
double estimate(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
  std::size_t differing = 0;
  for (std::size_t w = 0; w < x.size(); ++w) {
    differing += static_cast<std::size_t>(std::popcount(x[w] ^ y[w]));
  }
  const double agreement = 1.0 - static_cast<double>(differing) / static_cast<double>(64 * x.size());
  return std::max(0.0, (agreement - 0.5) * 2.0);
}

struct Hit {
  FileId file;
  double similarity;
};

// One query file against the whole visible corpus, in fileId order.
std::vector<Hit> scan(const QueryFile& q, const DatabaseView& view, const SearchParams& params,
                      SearchStats& stats) {
  std::vector<Hit> hits;
  const auto& entries = view.database().entries();
  const auto qSize = static_cast<double>(q.signature.trigramCount);
  const double estimateFloor = params.threshold - params.margin;
  for (std::size_t f = 0; f < entries.size(); ++f) {
    if (!view.entryVisible(static_cast<FileId>(f))) continue;
    const FileEntry& entry = entries[f];
    ++stats.pairsConsidered;
    const auto fSize = static_cast<double>(entry.signature.trigramCount);
    const double lo = std::min(qSize, fSize);
    const double hi = std::max(qSize, fSize);
    // Files without trigrams never match anything.
    const double ratio = hi == 0.0 ? 0.0 : lo / hi;
    if (ratio < params.threshold) {
      ++stats.sizePruned;
      continue;
    }
    if (estimate(q.signature.words, entry.signature.words) < estimateFloor) {
      ++stats.estimatePruned;
      continue;
    }
    ++stats.exactComputed;
    const double sim = params.auditTokens
                           ? jaccard(q.trigrams, trigrams(TokenSequence{entry.tokens, false}))
                           : hashedJaccard(q.trigramHashes, entry.trigramHashes);
    if (sim >= params.threshold) {
      ++stats.accepted;
      hits.push_back(Hit{static_cast<FileId>(f), sim});
    }
  }
  return hits;
}

// Best file of one component for one query: highest similarity, ties go to
// the lexicographically smallest path inside the component.
bool better(double sim, const std::string& path, const Match& current) {
  if (sim != current.similarity) return sim > current.similarity;
  return path < current.path;
}

void record(SearchOutcome& out, std::size_t queryIndex, FileId file, double sim, const FileEntry& entry,
            const DatabaseView& view) {
  for (const Owner& owner : entry.owners) {
    if (!view.componentVisible(owner.component)) continue;
    out.components.insert(owner.component);
    const QueryComponentKey key{queryIndex, owner.component};
    auto it = out.best.find(key);
    if (it == out.best.end()) {
      out.best.emplace(key, Match{file, owner.path, sim});
    } else if (better(sim, owner.path, it->second)) {
      it->second = Match{file, owner.path, sim};
    }
  }
}

}  // namespace

void SearchParams::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must be in (0, 1]");
  if (!(margin >= 0.0)) throw ConfigError("margin must be non-negative");
}

QueryFile QueryFile::build(const SourceFile& file, const HashFamily& family) {
  QueryFile q;
  q.path = file.path;
  q.tokens = tokenize(file);
  q.trigrams = oscn::trigrams(q.tokens);
  q.trigramHashes = baseHashes(q.trigrams);
  q.signature = signatureFromBases(q.trigramHashes, family, sha1(file.content));
  return q;
}

QuerySet QuerySet::build(std::vector<SourceFile> files, const HashFamily& family, unsigned threads) {
  std::sort(files.begin(), files.end(),
            [](const SourceFile& x, const SourceFile& y) { return x.path < y.path; });
  QuerySet set;
  std::vector<const SourceFile*> supported;
  for (const auto& f : files) {
    if (f.language == Language::Unknown) {
      set.skipped.push_back(f.path);
    } else {
      supported.push_back(&f);
    }
  }
  set.files.resize(supported.size());
  parallelFor(supported.size(), threads,
              [&](std::size_t i) { set.files[i] = QueryFile::build(*supported[i], family); });
  return set;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  pairsConsidered += o.pairsConsidered;
  sizePruned += o.sizePruned;
  estimatePruned += o.estimatePruned;
  exactComputed += o.exactComputed;
  accepted += o.accepted;
  return *this;
}

double SearchOutcome::similarity(std::size_t query, ComponentId component) const {
  auto it = best.find({query, component});
  return it == best.end() ? 0.0 : it->second.similarity;
}

double hashedJaccard(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) {
  if (x.empty() && y.empty()) return 1.0;
  std::size_t common = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t unionSize = x.size() + y.size() - common;
  return static_cast<double>(common) / static_cast<double>(unionSize);
}

SearchOutcome componentSearch(const QuerySet& query, const DatabaseView& view, const SearchParams& params) {
  params.validate();
  checkFamily(query, view);
  checkAudit(params, view);

  std::vector<std::vector<Hit>> hits(query.size());
  std::vector<SearchStats> stats(query.size());
  parallelFor(query.size(), params.threads,
              [&](std::size_t q) { hits[q] = scan(query.files[q], view, params, stats[q]); });

  // Merge in query order so the outcome does not depend on scheduling.
  SearchOutcome out;
  const auto& entries = view.database().entries();
  for (std::size_t q = 0; q < query.size(); ++q) {
    out.stats += stats[q];
    for (const Hit& hit : hits[q]) record(out, q, hit.file, hit.similarity, entries[hit.file], view);
  }
  return out;
}

SearchOutcome baselineSearch(const QuerySet& query, const DatabaseView& view) {
  SearchOutcome out;
  const auto& db = view.database();
  for (std::size_t q = 0; q < query.size(); ++q) {
    out.stats.pairsConsidered += view.visibleEntryCount();
    auto fileId = db.findDigest(query.files[q].signature.digest);
    if (!fileId || !view.entryVisible(*fileId)) continue;
    ++out.stats.accepted;
    record(out, q, *fileId, 1.0, db.entry(*fileId), view);
  }
  return out;
}

std::vector<SimilarFile> findSimilarFiles(const QueryFile& q, const DatabaseView& view,
                                          const SearchParams& params, SearchStats* stats) {
  params.validate();
  checkAudit(params, view);
  if (q.signature.family != view.family().fingerprint()) {
    throw SignatureMismatch("query file " + q.path + " was signed with a different hash family");
  }
  SearchStats local;
  const auto hits = scan(q, view, params, local);
  if (stats != nullptr) *stats += local;

  std::vector<SimilarFile> out;
  out.reserve(hits.size());
  for (const Hit& hit : hits) {
    SimilarFile row{hit.file, {}, hit.similarity};
    for (const Owner& owner : view.database().entry(hit.file).owners) {
      if (view.componentVisible(owner.component)) row.owners.push_back(owner);
    }
    out.push_back(std::move(row));
  }
  std::stable_sort(out.begin(), out.end(), [](const SimilarFile& x, const SimilarFile& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return x.file < y.file;
  });
  return out;
}

}  // namespace oscn
