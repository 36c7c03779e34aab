// On-disk database layout, all integers little-endian:
//
//   header     "OSCN" u32 version u32 k u32 b u32 flags u64 seed
//              k x (u64 multiplier, u64 offset)
//              u64 entryCount u64 componentCount u64 stringCount
//   strings    stringCount x (u32 length, bytes)
//   components componentCount x (u32 name, u32 refCount, refCount x (u32 fileId, u32 path))
//   signatures entryCount x (20-byte SHA-1, u64 trigramCount, k/64 x u64)
//   trigrams   entryCount x (u32 n, n x u64 base hash)   n == trigramCount
//   tokens     present only with kFlagTokens: entryCount x (u32 n, n x (u32 length, bytes))
//   owners     entryCount x (u32 n, n x (u32 componentId, u32 path))
//   trailer    SHA-256 of every preceding byte
//
// String fields hold indexes into the string table.

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "oscn/corpus.hpp"
#include "oscn/errors.hpp"

namespace oscn {

namespace {

constexpr char kMagic[4] = {'O', 'S', 'C', 'N'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kBitsPerHash = 1;
constexpr std::uint32_t kFlagUnsignedMin = 1U << 0;
constexpr std::uint32_t kFlagTokens = 1U << 1;
constexpr std::size_t kTrailerSize = 32;

class Writer {
 public:
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void bytes(std::string_view s) { out_.append(s); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  std::string& buffer() { return out_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string str() { return std::string(bytes(u32())); }
  bool done() const { return pos_ == data_.size(); }
  /// Rejects counts that could not possibly fit in the remaining bytes.
  std::size_t count(std::uint64_t n, std::size_t minBytesEach) {
    if (minBytesEach > 0 && n > (data_.size() - pos_) / minBytesEach) {
      throw IntegrityError("database record count exceeds file size");
    }
    return static_cast<std::size_t>(n);
  }

 private:
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) throw IntegrityError("database file is truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(data_[pos_ + i]);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

class StringTable {
 public:
  std::uint32_t intern(const std::string& s) {
    auto [it, inserted] = index_.emplace(s, static_cast<std::uint32_t>(strings_.size()));
    if (inserted) strings_.push_back(s);
    return it->second;
  }
  const std::vector<std::string>& strings() const { return strings_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> strings_;
};

}  // namespace

std::string SignatureDatabase::serialize() const {
  StringTable table;
  for (const auto& c : components_) {
    table.intern(c.name);
    for (const auto& ref : c.files) table.intern(ref.path);
  }

  Writer w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(family_.size()));
  w.u32(kBitsPerHash);
  w.u32(kFlagUnsignedMin | (options_.storeTokens ? kFlagTokens : 0U));
  w.u64(family_.seed());
  for (const auto& p : family_.params()) {
    w.u64(p.multiplier);
    w.u64(p.offset);
  }
  w.u64(entries_.size());
  w.u64(components_.size());
  w.u64(table.strings().size());

  for (const auto& s : table.strings()) w.str(s);

  for (const auto& c : components_) {
    w.u32(table.intern(c.name));
    w.u32(static_cast<std::uint32_t>(c.files.size()));
    for (const auto& ref : c.files) {
      w.u32(ref.file);
      w.u32(table.intern(ref.path));
    }
  }
  for (const auto& e : entries_) {
    w.bytes(std::string_view(reinterpret_cast<const char*>(e.digest().data()), e.digest().size()));
    w.u64(e.signature.trigramCount);
    for (std::uint64_t word : e.signature.words) w.u64(word);
  }
  for (const auto& e : entries_) {
    w.u32(static_cast<std::uint32_t>(e.trigramHashes.size()));
    for (std::uint64_t h : e.trigramHashes) w.u64(h);
  }
  if (options_.storeTokens) {
    for (const auto& e : entries_) {
      w.u32(static_cast<std::uint32_t>(e.tokens.size()));
      for (const auto& t : e.tokens) w.str(t);
    }
  }
  for (const auto& e : entries_) {
    w.u32(static_cast<std::uint32_t>(e.owners.size()));
    for (const auto& o : e.owners) {
      w.u32(o.component);
      w.u32(table.intern(o.path));
    }
  }
  const Sha256 checksum = sha256(w.buffer());
  w.bytes(std::string_view(reinterpret_cast<const char*>(checksum.data()), checksum.size()));
  return std::move(w.buffer());
}

SignatureDatabase SignatureDatabase::deserialize(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != std::string_view(kMagic, 4)) {
    throw FormatError("not a signature database (bad magic)");
  }
  {
    Reader probe(bytes.substr(4, 4));
    const std::uint32_t version = probe.u32();
    if (version != kVersion) {
      throw FormatError("unsupported database version " + std::to_string(version));
    }
  }
  if (bytes.size() < 8 + kTrailerSize) throw IntegrityError("database file is truncated");
  const std::string_view body = bytes.substr(0, bytes.size() - kTrailerSize);
  const Sha256 expected = sha256(body);
  if (bytes.substr(body.size()) !=
      std::string_view(reinterpret_cast<const char*>(expected.data()), expected.size())) {
    throw IntegrityError("database checksum mismatch");
  }

  Reader r(body);
  r.bytes(8);
  const std::uint32_t k = r.u32();
  const std::uint32_t b = r.u32();
  const std::uint32_t flags = r.u32();
  const std::uint64_t seed = r.u64();
  if (b != kBitsPerHash) throw FormatError("unsupported bits per hash: " + std::to_string(b));
  if ((flags & kFlagUnsignedMin) == 0) throw FormatError("database uses signed min-hash comparison");
  if (k == 0 || k % 64 != 0) throw FormatError("invalid hash count in header");

  std::vector<HashParams> params(r.count(k, 16));
  for (auto& p : params) {
    p.multiplier = r.u64();
    p.offset = r.u64();
  }
  HashFamily family = [&] {
    try {
      return HashFamily::fromParams(seed, std::move(params));
    } catch (const ConfigError& e) {
      throw IntegrityError(std::string("bad hash parameters: ") + e.what());
    }
  }();
  const std::size_t words = family.words();

  DatabaseOptions options;
  options.storeTokens = (flags & kFlagTokens) != 0;
  SignatureDatabase db(std::move(family), options);

  const std::size_t entryCount = r.count(r.u64(), 20 + 8 + 8 * words);
  const std::size_t componentCount = r.count(r.u64(), 8);
  const std::size_t stringCount = r.count(r.u64(), 4);

  std::vector<std::string> strings(stringCount);
  for (auto& s : strings) s = r.str();
  auto lookup = [&](std::uint32_t idx) -> const std::string& {
    if (idx >= strings.size()) throw IntegrityError("string index out of range");
    return strings[idx];
  };

  db.components_.resize(componentCount);
  for (auto& c : db.components_) {
    c.name = lookup(r.u32());
    c.files.resize(r.count(r.u32(), 8));
    for (auto& ref : c.files) {
      ref.file = r.u32();
      ref.path = lookup(r.u32());
      if (ref.file >= entryCount) throw IntegrityError("component references a missing file");
    }
  }

  db.entries_.resize(entryCount);
  const std::uint64_t fingerprint = db.family_.fingerprint();
  for (auto& e : db.entries_) {
    auto digest = r.bytes(20);
    std::copy(digest.begin(), digest.end(), e.signature.digest.begin());
    e.signature.trigramCount = r.u64();
    e.signature.words.resize(words);
    for (auto& word : e.signature.words) word = r.u64();
    e.signature.family = fingerprint;
  }
  for (auto& e : db.entries_) {
    e.trigramHashes.resize(r.count(r.u32(), 8));
    for (auto& h : e.trigramHashes) h = r.u64();
    if (e.trigramHashes.size() != e.signature.trigramCount) {
      throw IntegrityError("trigram count does not match stored trigram hashes");
    }
  }
  if (options.storeTokens) {
    for (auto& e : db.entries_) {
      e.tokens.resize(r.count(r.u32(), 4));
      for (auto& t : e.tokens) t = r.str();
    }
  }
  for (auto& e : db.entries_) {
    e.owners.resize(r.count(r.u32(), 8));
    if (e.owners.empty()) throw IntegrityError("file entry without owners");
    for (auto& o : e.owners) {
      o.component = r.u32();
      o.path = lookup(r.u32());
      if (o.component >= componentCount) throw IntegrityError("owner references a missing component");
    }
  }
  if (!r.done()) throw IntegrityError("trailing bytes before checksum");

  db.rebuildIndexes();
  if (db.byDigest_.size() != db.entries_.size()) throw IntegrityError("duplicate file digest");
  if (db.byName_.size() != db.components_.size()) throw IntegrityError("duplicate component name");
  std::size_t refs = 0;
  std::size_t owners = 0;
  for (const auto& c : db.components_) refs += c.files.size();
  for (const auto& e : db.entries_) owners += e.owners.size();
  if (refs != owners) throw IntegrityError("owners do not match component file lists");
  return db;
}

void SignatureDatabase::save(const std::filesystem::path& path) const {
  const std::string bytes = serialize();
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot write database: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IngestError("cannot write database: " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IngestError("cannot write database: " + path.string() + ": " + ec.message());
}

SignatureDatabase SignatureDatabase::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open database: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace oscn
