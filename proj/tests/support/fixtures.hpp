#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "oscn/corpus.hpp"
#include "oscn/search.hpp"

#ifndef OSCN_FIXTURE_DIR
#error "OSCN_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace oscn::testing {

inline std::filesystem::path fixtureDir() { return OSCN_FIXTURE_DIR; }
inline std::filesystem::path exampleDir() { return fixtureDir() / "example"; }

/// X-1.0, X-1.1 and Y-0.2 ingested in that order.
inline SignatureDatabase exampleDatabase(const HashFamily& family) {
  SignatureDatabase db(family);
  for (const char* name : {"X-1.0", "X-1.1", "Y-0.2"}) db.ingestComponent(name, exampleDir() / name);
  return db;
}

inline QuerySet exampleQuery(const HashFamily& family) {
  return QuerySet::build(collectSourceFiles(exampleDir() / "query").files, family);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("oscn-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void writeFile(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << content;
}

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace oscn::testing
