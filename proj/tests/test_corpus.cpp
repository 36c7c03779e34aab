#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "oscn/archive.hpp"
#include "oscn/errors.hpp"
#include "oscn/ranking.hpp"

namespace oscn {
namespace {

using testing::exampleDatabase;
using testing::exampleDir;
using testing::readFile;
using testing::TempDir;
using testing::writeFile;

const HashFamily& smallFamily() {
  static const HashFamily f = HashFamily::make(11, 256);
  return f;
}

SourceFile file(const std::string& path, const std::string& content) { return SourceFile::fromBytes(path, content); }

void expectDedupInvariants(const SignatureDatabase& db) {
  std::size_t refs = 0;
  for (const auto& c : db.components()) refs += c.fileCount();
  std::size_t owners = 0;
  for (const auto& e : db.entries()) {
    EXPECT_FALSE(e.owners.empty());
    owners += e.owners.size();
  }
  EXPECT_EQ(refs, owners);
  std::vector<Digest> digests;
  for (const auto& e : db.entries()) digests.push_back(e.digest());
  std::sort(digests.begin(), digests.end());
  EXPECT_EQ(std::adjacent_find(digests.begin(), digests.end()), digests.end());
}

TEST(Ingest, SharedFileIsStoredOnce) {
  SignatureDatabase db(smallFamily());
  db.ingestFiles("a-1", {file("x.c", "int x;"), file("y.c", "int y;")});
  const IngestSummary s = db.ingestFiles("b-1", {file("lib/x.c", "int x;")});
  EXPECT_EQ(s.filesDeduped, 1U);
  EXPECT_EQ(s.filesIndexed, 0U);
  ASSERT_EQ(db.entries().size(), 2U);
  const FileId shared = *db.findDigest(sha1("int x;"));
  const auto& owners = db.entry(shared).owners;
  ASSERT_EQ(owners.size(), 2U);
  EXPECT_EQ(owners[0], (Owner{0, "x.c"}));
  EXPECT_EQ(owners[1], (Owner{1, "lib/x.c"}));
  expectDedupInvariants(db);
}

TEST(Ingest, ZeroSupportedFilesStillRecordsComponent) {
  SignatureDatabase db(smallFamily());
  const IngestSummary s = db.ingestFiles("docs-1.0", {file("README", "hi"), file("a.py", "print(1)")});
  EXPECT_EQ(s.filesSeen, 2U);
  EXPECT_EQ(s.filesSkipped, 2U);
  ASSERT_TRUE(db.findComponent("docs-1.0"));
  EXPECT_EQ(db.component(*db.findComponent("docs-1.0")).fileCount(), 0U);
}

TEST(Ingest, ExampleFileCounts) {
  const SignatureDatabase db = exampleDatabase(smallFamily());
  ASSERT_EQ(db.components().size(), 3U);
  EXPECT_EQ(db.components()[0].name, "X-1.0");
  EXPECT_EQ(db.components()[0].fileCount(), 3U);
  EXPECT_EQ(db.components()[1].fileCount(), 3U);
  EXPECT_EQ(db.components()[2].fileCount(), 5U);
  expectDedupInvariants(db);
}

TEST(Ingest, DuplicateNameRejected) {
  SignatureDatabase db(smallFamily());
  db.ingestFiles("a-1", {file("x.c", "int x;")});
  EXPECT_THROW(db.ingestFiles("a-1", {file("y.c", "int y;")}), DuplicateComponent);
  EXPECT_EQ(db.components().size(), 1U);
  EXPECT_EQ(db.entries().size(), 1U);
}

TEST(Ingest, UnreadableRoot) {
  SignatureDatabase db(smallFamily());
  EXPECT_THROW(db.ingestComponent("nope", "/nonexistent/oscn/root"), IngestError);
  EXPECT_TRUE(db.components().empty());
}

TEST(Ingest, LossyDecodeIsFlaggedNotFatal) {
  SignatureDatabase db(smallFamily());
  const IngestSummary s = db.ingestFiles("bad-1", {file("a.c", "int \xff\xfe x;"), file("b.c", "int y;")});
  EXPECT_EQ(s.filesIndexed, 2U);
  EXPECT_EQ(s.lossyDecoded, 1U);
  EXPECT_EQ(s.errors, 0U);
}

TEST(Ingest, TarGzMatchesDirectory) {
  TempDir tmp;
  std::vector<ArchiveMember> members;
  for (const auto& f : collectSourceFiles(exampleDir() / "Y-0.2").files) {
    members.push_back({"Y-0.2/" + f.path, f.content});
  }
  members.push_back({"Y-0.2/NOTES.txt", "not source"});
  writeTarGz(tmp / "y.tar.gz", members);

  SignatureDatabase fromDir(smallFamily());
  fromDir.ingestComponent("Y-0.2", exampleDir() / "Y-0.2");
  SignatureDatabase fromTar(smallFamily());
  const IngestSummary s = fromTar.ingestComponent("Y-0.2", tmp / "y.tar.gz");
  EXPECT_EQ(s.filesSkipped, 1U);
  ASSERT_EQ(fromTar.entries().size(), fromDir.entries().size());
  for (std::size_t i = 0; i < fromDir.entries().size(); ++i) {
    EXPECT_EQ(fromTar.entries()[i].signature, fromDir.entries()[i].signature);
  }
  // Archive members keep their top-level directory in the path.
  EXPECT_EQ(fromTar.components()[0].files[0].path, "Y-0.2/P.c");
}

TEST(Ingest, TarGzLongNamesRoundTrip) {
  TempDir tmp;
  const std::string longPath = std::string(120, 'd') + "/" + std::string(90, 'f') + ".c";
  writeTarGz(tmp / "long.tgz", {{longPath, "int z;"}});
  const auto members = readTarGz(tmp / "long.tgz");
  ASSERT_EQ(members.size(), 1U);
  EXPECT_EQ(members[0].path, longPath);
  EXPECT_EQ(members[0].content, "int z;");
}

TEST(Ingest, OrderDoesNotChangeReports) {
  const HashFamily& f = smallFamily();
  std::mt19937_64 rng(5);
  testing::CorpusShape shape;
  shape.packages = 3;
  shape.versionsPerPackage = 3;
  shape.filesPerPackage = 6;
  const auto corpus = testing::makeCorpus(rng, shape);

  SignatureDatabase forward(f);
  for (const auto& c : corpus.components) forward.ingestFiles(c.name, c.files);
  SignatureDatabase backward(f);
  for (auto it = corpus.components.rbegin(); it != corpus.components.rend(); ++it) {
    std::vector<SourceFile> files = it->files;
    std::reverse(files.begin(), files.end());
    backward.ingestFiles(it->name, files);
  }

  const QuerySet q = QuerySet::build(corpus.query, f);
  SearchParams params;
  params.threshold = 0.6;
  const DatabaseView v1(forward);
  const DatabaseView v2(backward);
  const ComponentReport r1 = buildReport(componentSearch(q, v1, params), q, v1);
  const ComponentReport r2 = buildReport(componentSearch(q, v2, params), q, v2);
  ASSERT_EQ(r1.fullList.size(), r2.fullList.size());
  for (std::size_t i = 0; i < r1.fullList.size(); ++i) {
    EXPECT_EQ(r1.fullList[i].name, r2.fullList[i].name);
    EXPECT_EQ(r1.fullList[i].perFile, r2.fullList[i].perFile);
  }
  ASSERT_EQ(r1.table.cells.size(), r2.table.cells.size());
  for (std::size_t i = 0; i < r1.table.cells.size(); ++i) {
    for (std::size_t j = 0; j < r1.table.cells[i].size(); ++j) {
      EXPECT_EQ(r1.table.cells[i][j].path, r2.table.cells[i][j].path);
    }
  }
}

TEST(Persistence, RoundTripIsLossless) {
  SignatureDatabase db = exampleDatabase(smallFamily());
  db.ingestFiles("empty-1", {});
  db.ingestFiles("blank-1", {file("e.c", "")});
  const SignatureDatabase back = SignatureDatabase::deserialize(db.serialize());
  EXPECT_EQ(back, db);
  EXPECT_EQ(back.family().params().size(), 256U);
  EXPECT_EQ(back.family().fingerprint(), db.family().fingerprint());
  EXPECT_EQ(back.findComponent("Y-0.2"), db.findComponent("Y-0.2"));
  EXPECT_EQ(back.serialize(), db.serialize());
}

TEST(Persistence, TokensAreStoredWhenRequested) {
  SignatureDatabase db(smallFamily(), DatabaseOptions{true, 1});
  db.ingestFiles("a-1", {file("x.c", "int x = 1;")});
  ASSERT_EQ(db.entries()[0].tokens, (std::vector<std::string>{"int", "x", "=", "1", ";"}));
  const SignatureDatabase back = SignatureDatabase::deserialize(db.serialize());
  EXPECT_TRUE(back.storesTokens());
  EXPECT_EQ(back, db);

  SignatureDatabase plain(smallFamily());
  plain.ingestFiles("a-1", {file("x.c", "int x = 1;")});
  EXPECT_TRUE(plain.entries()[0].tokens.empty());
  EXPECT_LT(plain.serialize().size(), db.serialize().size());
}

TEST(Persistence, SameInputsGiveIdenticalBytes) {
  TempDir tmp;
  exampleDatabase(HashFamily::make(kDefaultSeed, 2048)).save(tmp / "a.db");
  exampleDatabase(HashFamily::make(kDefaultSeed, 2048)).save(tmp / "b.db");
  EXPECT_EQ(readFile(tmp / "a.db"), readFile(tmp / "b.db"));
  EXPECT_FALSE(std::filesystem::exists(tmp / "a.db.tmp"));
}

TEST(Persistence, CorruptionIsDetected) {
  const std::string bytes = exampleDatabase(smallFamily()).serialize();

  std::string trailer = bytes;
  trailer.back() = static_cast<char>(trailer.back() ^ 0x01);
  EXPECT_THROW(SignatureDatabase::deserialize(trailer), IntegrityError);

  std::string body = bytes;
  body[body.size() / 2] = static_cast<char>(body[body.size() / 2] ^ 0x40);
  EXPECT_THROW(SignatureDatabase::deserialize(body), IntegrityError);

  EXPECT_THROW(SignatureDatabase::deserialize(bytes.substr(0, bytes.size() - 7)), IntegrityError);
  EXPECT_THROW(SignatureDatabase::deserialize(bytes.substr(0, 10)), IntegrityError);

  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(SignatureDatabase::deserialize(magic), FormatError);

  std::string version = bytes;
  version[4] = 9;
  EXPECT_THROW(SignatureDatabase::deserialize(version), FormatError);

  EXPECT_THROW(SignatureDatabase::deserialize(""), FormatError);
}

TEST(Persistence, HeaderDecidesHashFamily) {
  TempDir tmp;
  SignatureDatabase db(HashFamily::make(kDefaultSeed, 2048));
  db.ingestFiles("a-1", {file("x.c", "int x;")});
  db.save(tmp / "k2048.db");
  // A caller that would default to 1024 hashes still gets the stored family.
  const SignatureDatabase back = SignatureDatabase::load(tmp / "k2048.db");
  EXPECT_EQ(back.family().size(), 2048U);
  EXPECT_EQ(back.family(), HashFamily::make(kDefaultSeed, 2048));
  EXPECT_NE(back.family(), HashFamily::make(kDefaultSeed, 1024));
}

TEST(Persistence, MissingFileIsAnError) {
  EXPECT_THROW(SignatureDatabase::load("/nonexistent/oscn.db"), Error);
}

TEST(Exclude, HidesMatchingComponentsAndOrphanedEntries) {
  SignatureDatabase db(smallFamily());
  db.ingestFiles("firefox-3.0", {file("a.c", "int a;"), file("s.c", "int s;")});
  db.ingestFiles("firefox-3.5", {file("a.c", "int a;")});
  db.ingestFiles("zlib-1.2.8", {file("s.c", "int s;"), file("z.c", "int z;")});

  const std::vector<std::string> patterns = {"firefox*"};
  const DatabaseView view = excludeComponents(db, patterns);
  EXPECT_EQ(view.visibleComponentCount(), 1U);
  EXPECT_FALSE(view.componentVisible(0));
  EXPECT_TRUE(view.componentVisible(2));
  EXPECT_FALSE(view.entryVisible(*db.findDigest(sha1("int a;"))));
  EXPECT_TRUE(view.entryVisible(*db.findDigest(sha1("int s;"))));
  EXPECT_EQ(view.visibleEntryCount(), 2U);
  // The database itself is untouched.
  EXPECT_EQ(db.components().size(), 3U);

  const QuerySet q = QuerySet::build({file("q/a.c", "int a;"), file("q/s.c", "int s;")}, smallFamily());
  const SearchOutcome out = componentSearch(q, view, SearchParams{});
  for (ComponentId c : out.components) EXPECT_FALSE(globMatch("firefox*", db.component(c).name));
  EXPECT_EQ(out.components, (std::set<ComponentId>{2}));
}

TEST(Exclude, EmptyPatternListIsIdentity) {
  const SignatureDatabase db = exampleDatabase(smallFamily());
  const DatabaseView view = excludeComponents(db, {});
  EXPECT_EQ(view.visibleComponentCount(), db.components().size());
  EXPECT_EQ(view.visibleEntryCount(), db.entries().size());
}

TEST(Exclude, ExcludingEverythingEmptiesResults) {
  const SignatureDatabase db = exampleDatabase(smallFamily());
  const std::vector<std::string> all = {"*"};
  const DatabaseView view = excludeComponents(db, all);
  EXPECT_EQ(view.visibleEntryCount(), 0U);
  const QuerySet q = testing::exampleQuery(smallFamily());
  SearchParams params;
  params.threshold = 0.6;
  EXPECT_TRUE(componentSearch(q, view, params).components.empty());
  EXPECT_TRUE(baselineSearch(q, view).components.empty());
}

TEST(Glob, Patterns) {
  EXPECT_TRUE(globMatch("zlib-*", "zlib-1.2.8"));
  EXPECT_TRUE(globMatch("zlib-1.2.?", "zlib-1.2.8"));
  EXPECT_TRUE(globMatch("[xy]-*", "y-0.2"));
  EXPECT_FALSE(globMatch("zlib-*", "libzlib-1"));
  EXPECT_FALSE(globMatch("", "a"));
}

TEST(Collect, DirectoryWalkIsSortedAndRelative) {
  TempDir tmp;
  writeFile(tmp / "b.c", "int b;");
  writeFile(tmp / "sub/a.h", "int a;");
  writeFile(tmp / "sub/readme.md", "text");
  const auto collected = collectSourceFiles(tmp.path());
  std::vector<std::string> paths;
  for (const auto& f : collected.files) paths.push_back(f.path);
  EXPECT_EQ(paths, (std::vector<std::string>{"b.c", "sub/a.h", "sub/readme.md"}));
  EXPECT_EQ(collected.files[1].language, Language::CCpp);
  EXPECT_EQ(collected.files[2].language, Language::Unknown);
}

}  // namespace
}  // namespace oscn
