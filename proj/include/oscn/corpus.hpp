#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oscn/digest.hpp"
#include "oscn/lexer.hpp"
#include "oscn/minhash.hpp"

namespace oscn {

using FileId = std::uint32_t;
using ComponentId = std::uint32_t;

struct FileRef {
  FileId file = 0;
  std::string path;
  friend bool operator==(const FileRef&, const FileRef&) = default;
};

/// A named version of a package, e.g. "zlib-1.2.8".
struct Component {
  std::string name;
  std::vector<FileRef> files;

  std::size_t fileCount() const { return files.size(); }
  friend bool operator==(const Component&, const Component&) = default;
};

struct Owner {
  ComponentId component = 0;
  std::string path;
  friend bool operator==(const Owner&, const Owner&) = default;
};

/// One unique file content. Exact similarity against it runs on the sorted
/// base-hash list of its trigrams.
struct FileEntry {
  FileSignature signature;
  std::vector<std::uint64_t> trigramHashes;
  /// Raw token stream, only kept when the database stores tokens.
  std::vector<std::string> tokens;
  std::vector<Owner> owners;

  const Digest& digest() const { return signature.digest; }
  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

struct IngestSummary {
  std::string component;
  std::size_t filesSeen = 0;
  std::size_t filesIndexed = 0;
  std::size_t filesDeduped = 0;
  std::size_t filesSkipped = 0;
  std::size_t errors = 0;
  std::size_t lossyDecoded = 0;
  std::vector<std::string> messages;
};

struct DatabaseOptions {
  bool storeTokens = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Tokenizes, hashes and signs one file.
struct IndexedFile {
  TokenSequence tokens;
  std::vector<std::uint64_t> trigramHashes;
  FileSignature signature;
};
IndexedFile indexFile(const SourceFile& file, const HashFamily& family);

/// Every ingested component plus one entry per distinct file content.
class SignatureDatabase {
 public:
  explicit SignatureDatabase(HashFamily family, DatabaseOptions options = {});

  const HashFamily& family() const { return family_; }
  bool storesTokens() const { return options_.storeTokens; }
  void setThreads(unsigned threads) { options_.threads = threads; }

  const std::vector<FileEntry>& entries() const { return entries_; }
  const std::vector<Component>& components() const { return components_; }
  const FileEntry& entry(FileId id) const { return entries_.at(id); }
  const Component& component(ComponentId id) const { return components_.at(id); }

  std::optional<ComponentId> findComponent(std::string_view name) const;
  std::optional<FileId> findDigest(const Digest& digest) const;

  /// Adds a component from in-memory files. Files with unsupported
  /// extensions are counted as skipped. Throws DuplicateComponent.
  IngestSummary ingestFiles(const std::string& name, std::vector<SourceFile> files);

  /// Adds a component from a directory tree or a .tar.gz/.tgz archive.
  /// Throws DuplicateComponent or IngestError (unreadable root).
  IngestSummary ingestComponent(const std::string& name, const std::filesystem::path& root);

  std::string serialize() const;
  /// Throws FormatError or IntegrityError.
  static SignatureDatabase deserialize(std::string_view bytes);

  void save(const std::filesystem::path& path) const;
  static SignatureDatabase load(const std::filesystem::path& path);

  friend bool operator==(const SignatureDatabase& x, const SignatureDatabase& y) {
    return x.family_ == y.family_ && x.options_.storeTokens == y.options_.storeTokens &&
           x.entries_ == y.entries_ && x.components_ == y.components_;
  }

 private:
  void rebuildIndexes();

  HashFamily family_;
  DatabaseOptions options_;
  std::vector<FileEntry> entries_;
  std::vector<Component> components_;
  std::unordered_map<Digest, FileId, DigestHash> byDigest_;
  std::unordered_map<std::string, ComponentId> byName_;
};

/// A read-only window onto a database with some components hidden. Entries
/// whose owners are all hidden become invisible too.
class DatabaseView {
 public:
  explicit DatabaseView(const SignatureDatabase& db);

  const SignatureDatabase& database() const { return *db_; }
  const HashFamily& family() const { return db_->family(); }

  bool componentVisible(ComponentId id) const { return componentVisible_[id] != 0; }
  bool entryVisible(FileId id) const { return entryVisible_[id] != 0; }
  std::size_t visibleComponentCount() const;
  std::size_t visibleEntryCount() const;

  /// Hides every component whose name matches one of the glob patterns.
  void hide(std::span<const std::string> patterns);

 private:
  const SignatureDatabase* db_;
  std::vector<char> componentVisible_;
  std::vector<char> entryVisible_;
};

/// View with components matching any glob pattern excluded; an empty
/// pattern list gives the identity view.
DatabaseView excludeComponents(const SignatureDatabase& db, std::span<const std::string> patterns);

/// Shell-style glob match (*, ?, [...]).
bool globMatch(std::string_view pattern, std::string_view name);

/// Supported source files under a directory or inside a .tar.gz archive,
/// sorted by relative path. Unsupported files are returned too (the caller
/// decides). Throws IngestError when the root cannot be read.
struct CollectedFiles {
  std::vector<SourceFile> files;
  std::vector<std::string> errors;
};
CollectedFiles collectSourceFiles(const std::filesystem::path& root);

bool isTarGz(const std::filesystem::path& path);

}  // namespace oscn
