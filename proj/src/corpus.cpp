#include "oscn/corpus.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "oscn/archive.hpp"
#include "oscn/errors.hpp"
#include "oscn/parallel.hpp"

namespace oscn {

namespace fs = std::filesystem;

IndexedFile indexFile(const SourceFile& file, const HashFamily& family) {
  IndexedFile out;
  out.tokens = tokenize(file);
  out.trigramHashes = baseHashes(trigrams(out.tokens));
  out.signature = signatureFromBases(out.trigramHashes, family, sha1(file.content));
  return out;
}

SignatureDatabase::SignatureDatabase(HashFamily family, DatabaseOptions options)
    : family_(std::move(family)), options_(options) {}

std::optional<ComponentId> SignatureDatabase::findComponent(std::string_view name) const {
  auto it = byName_.find(std::string(name));
  if (it == byName_.end()) return std::nullopt;
  return it->second;
}

std::optional<FileId> SignatureDatabase::findDigest(const Digest& digest) const {
  auto it = byDigest_.find(digest);
  if (it == byDigest_.end()) return std::nullopt;
  return it->second;
}

void SignatureDatabase::rebuildIndexes() {
  byDigest_.clear();
  byName_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    byDigest_.emplace(entries_[i].digest(), static_cast<FileId>(i));
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    byName_.emplace(components_[i].name, static_cast<ComponentId>(i));
  }
}

IngestSummary SignatureDatabase::ingestFiles(const std::string& name, std::vector<SourceFile> files) {
  if (byName_.contains(name)) throw DuplicateComponent("component already exists: " + name);

  std::sort(files.begin(), files.end(),
            [](const SourceFile& x, const SourceFile& y) { return x.path < y.path; });

  IngestSummary summary;
  summary.component = name;
  summary.filesSeen = files.size();

  std::vector<const SourceFile*> supported;
  for (const auto& f : files) {
    if (f.language == Language::Unknown) {
      ++summary.filesSkipped;
    } else {
      supported.push_back(&f);
    }
  }

  // Digests first, so only contents new to the database get lexed and signed.
  std::vector<Digest> digests(supported.size());
  parallelFor(supported.size(), options_.threads,
              [&](std::size_t i) { digests[i] = sha1(supported[i]->content); });

  std::vector<std::size_t> fresh;
  {
    std::unordered_map<Digest, std::size_t, DigestHash> firstSeen;
    for (std::size_t i = 0; i < supported.size(); ++i) {
      if (!byDigest_.contains(digests[i]) && firstSeen.emplace(digests[i], i).second) {
        fresh.push_back(i);
      }
    }
  }
  std::vector<IndexedFile> indexed(fresh.size());
  parallelFor(fresh.size(), options_.threads,
              [&](std::size_t j) { indexed[j] = indexFile(*supported[fresh[j]], family_); });

  // Single writer: entries and owners are appended in path order.
  const auto componentId = static_cast<ComponentId>(components_.size());
  Component component{name, {}};
  std::size_t nextFresh = 0;
  for (std::size_t i = 0; i < supported.size(); ++i) {
    FileId fileId = 0;
    if (auto existing = byDigest_.find(digests[i]); existing != byDigest_.end()) {
      fileId = existing->second;
      ++summary.filesDeduped;
    } else {
      IndexedFile& idx = indexed[nextFresh++];
      fileId = static_cast<FileId>(entries_.size());
      FileEntry entry;
      entry.signature = std::move(idx.signature);
      entry.trigramHashes = std::move(idx.trigramHashes);
      if (options_.storeTokens) entry.tokens = std::move(idx.tokens.tokens);
      if (idx.tokens.lossyDecoded) {
        ++summary.lossyDecoded;
        summary.messages.push_back("invalid UTF-8 replaced in " + supported[i]->path);
      }
      entries_.push_back(std::move(entry));
      byDigest_.emplace(digests[i], fileId);
      ++summary.filesIndexed;
    }
    entries_[fileId].owners.push_back(Owner{componentId, supported[i]->path});
    component.files.push_back(FileRef{fileId, supported[i]->path});
  }
  components_.push_back(std::move(component));
  byName_.emplace(name, componentId);
  return summary;
}

IngestSummary SignatureDatabase::ingestComponent(const std::string& name, const fs::path& root) {
  if (byName_.contains(name)) throw DuplicateComponent("component already exists: " + name);
  CollectedFiles collected = collectSourceFiles(root);
  IngestSummary summary = ingestFiles(name, std::move(collected.files));
  summary.errors += collected.errors.size();
  summary.filesSeen += collected.errors.size();
  for (auto& e : collected.errors) summary.messages.push_back(std::move(e));
  return summary;
}

bool isTarGz(const fs::path& path) {
  const std::string name = path.filename().string();
  return name.ends_with(".tar.gz") || name.ends_with(".tgz");
}

CollectedFiles collectSourceFiles(const fs::path& root) {
  CollectedFiles out;
  std::error_code ec;
  if (fs::is_regular_file(root, ec) && isTarGz(root)) {
    for (auto& member : readTarGz(root)) {
      out.files.push_back(SourceFile::fromBytes(std::move(member.path), std::move(member.content)));
    }
  } else if (fs::is_directory(root, ec)) {
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IngestError("cannot read " + root.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) {
        out.errors.push_back("walk error under " + root.string() + ": " + ec.message());
        break;
      }
      std::error_code fileEc;
      if (!it->is_regular_file(fileEc)) continue;
      const std::string rel = fs::relative(it->path(), root, fileEc).generic_string();
      if (languageFromPath(rel) == Language::Unknown) {
        out.files.push_back(SourceFile{rel, Language::Unknown, {}});
        continue;
      }
      std::ifstream in(it->path(), std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      if (!in.good() && !in.eof()) {
        out.errors.push_back("cannot read " + rel);
        continue;
      }
      out.files.push_back(SourceFile::fromBytes(rel, std::move(buf).str()));
    }
  } else {
    throw IngestError("not a directory or .tar.gz archive: " + root.string());
  }
  std::sort(out.files.begin(), out.files.end(),
            [](const SourceFile& x, const SourceFile& y) { return x.path < y.path; });
  return out;
}

bool globMatch(std::string_view pattern, std::string_view name) {
  return fnmatch(std::string(pattern).c_str(), std::string(name).c_str(), 0) == 0;
}

DatabaseView::DatabaseView(const SignatureDatabase& db)
    : db_(&db), componentVisible_(db.components().size(), 1), entryVisible_(db.entries().size(), 1) {}

std::size_t DatabaseView::visibleComponentCount() const {
  return static_cast<std::size_t>(std::count(componentVisible_.begin(), componentVisible_.end(), 1));
}

std::size_t DatabaseView::visibleEntryCount() const {
  return static_cast<std::size_t>(std::count(entryVisible_.begin(), entryVisible_.end(), 1));
}

void DatabaseView::hide(std::span<const std::string> patterns) {
  if (patterns.empty()) return;
  const auto& components = db_->components();
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (const auto& pattern : patterns) {
      if (globMatch(pattern, components[c].name)) {
        componentVisible_[c] = 0;
        break;
      }
    }
  }
  const auto& entries = db_->entries();
  for (std::size_t f = 0; f < entries.size(); ++f) {
    entryVisible_[f] = std::any_of(entries[f].owners.begin(), entries[f].owners.end(),
                                   [&](const Owner& o) { return componentVisible_[o.component] != 0; })
                           ? 1
                           : 0;
  }
}

DatabaseView excludeComponents(const SignatureDatabase& db, std::span<const std::string> patterns) {
  DatabaseView view(db);
  view.hide(patterns);
  return view;
}

}  // namespace oscn
