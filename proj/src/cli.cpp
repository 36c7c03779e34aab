#include "oscn/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "oscn/corpus.hpp"
#include "oscn/errors.hpp"
#include "oscn/ranking.hpp"
#include "oscn/report.hpp"
#include "oscn/search.hpp"

namespace oscn::cli {

namespace fs = std::filesystem;

namespace {

struct ComponentSpec {
  std::string name;
  std::string path;
};

struct Config {
  std::string db;
  unsigned threads = 0;

  // index
  std::vector<std::string> specs;
  std::string manifest;
  std::uint64_t seed = kDefaultSeed;
  std::size_t k = kDefaultHashCount;
  bool storeTokens = false;

  // query / baseline
  std::string queryDir;
  std::string filesFrom;
  double threshold = kDefaultThreshold;
  double margin = kDefaultMargin;
  std::vector<std::string> exclude;
  std::size_t topN = kDefaultTopN;
  std::string format = "text";
  std::string output;
  bool stats = false;
  bool auditTokens = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

ComponentSpec parseSpec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw UsageError("component spec must look like name=path: " + text);
  }
  return ComponentSpec{text.substr(0, eq), text.substr(eq + 1)};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> readLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<ComponentSpec> collectSpecs(const Config& cfg) {
  std::vector<ComponentSpec> specs;
  if (!cfg.manifest.empty()) {
    const fs::path base = fs::path(cfg.manifest).parent_path();
    for (const auto& line : readLines(cfg.manifest)) {
      ComponentSpec spec = parseSpec(line);
      if (fs::path(spec.path).is_relative() && !base.empty()) spec.path = (base / spec.path).string();
      specs.push_back(std::move(spec));
    }
  }
  for (const auto& s : cfg.specs) specs.push_back(parseSpec(s));
  if (specs.empty()) throw UsageError("index needs at least one name=path component spec");
  return specs;
}

void requireDb(const Config& cfg) {
  if (cfg.db.empty()) throw UsageError("no database given (use --db or set OSCN_DB)");
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write " + cfg.output);
  file << text;
}

int cmdIndex(const Config& cfg, std::ostream& out, std::ostream& err) {
  requireDb(cfg);
  const auto specs = collectSpecs(cfg);

  std::optional<SignatureDatabase> db;
  if (fs::exists(cfg.db)) {
    db.emplace(SignatureDatabase::load(cfg.db));
    if (db->family().size() != cfg.k || db->family().seed() != cfg.seed) {
      err << "note: using k=" << db->family().size() << " seed=" << db->family().seed()
          << " from the existing database header\n";
    }
  } else {
    DatabaseOptions options;
    options.storeTokens = cfg.storeTokens;
    db.emplace(HashFamily::make(cfg.seed, cfg.k), options);
  }
  db->setThreads(cfg.threads);

  int failures = 0;
  for (const auto& spec : specs) {
    try {
      const IngestSummary s = db->ingestComponent(spec.name, spec.path);
      out << spec.name << ": " << s.filesSeen << " seen, " << s.filesIndexed << " indexed, " << s.filesDeduped
          << " deduplicated, " << s.filesSkipped << " skipped, " << s.errors << " errors\n";
      for (const auto& m : s.messages) err << "  " << spec.name << ": " << m << "\n";
    } catch (const Error& e) {
      ++failures;
      err << "error: " << spec.name << ": " << e.what() << "\n";
    }
  }
  db->save(cfg.db);
  out << "database " << cfg.db << ": " << db->components().size() << " components, " << db->entries().size()
      << " unique files\n";
  return failures == 0 ? kOk : kDataError;
}

std::vector<SourceFile> readQueryFiles(const Config& cfg, std::string& root) {
  std::vector<SourceFile> files;
  if (!cfg.queryDir.empty()) {
    root = cfg.queryDir;
    files = collectSourceFiles(cfg.queryDir).files;
  }
  if (!cfg.filesFrom.empty()) {
    if (root.empty()) root = cfg.filesFrom;
    for (const auto& path : readLines(cfg.filesFrom)) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IngestError("cannot read query file " + path);
      std::ostringstream buf;
      buf << in.rdbuf();
      files.push_back(SourceFile::fromBytes(path, std::move(buf).str()));
    }
  }
  if (cfg.queryDir.empty() && cfg.filesFrom.empty()) {
    throw UsageError("query needs a directory or --files-from");
  }
  return files;
}

int cmdSearch(const Config& cfg, bool baseline, std::ostream& out) {
  requireDb(cfg);
  const OutputFormat format = [&] {
    try {
      return parseOutputFormat(cfg.format);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }();
  SearchParams params;
  params.threshold = baseline ? 1.0 : cfg.threshold;
  params.margin = baseline ? 0.0 : cfg.margin;
  params.threads = cfg.threads;
  params.auditTokens = cfg.auditTokens;
  try {
    params.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  const SignatureDatabase db = SignatureDatabase::load(cfg.db);
  const DatabaseView view = excludeComponents(db, cfg.exclude);
  std::string root;
  auto files = readQueryFiles(cfg, root);

  const auto start = std::chrono::steady_clock::now();
  const QuerySet query = QuerySet::build(std::move(files), db.family(), cfg.threads);
  const SearchOutcome outcome = baseline ? baselineSearch(query, view) : componentSearch(query, view, params);
  const ComponentReport report = buildReport(outcome, query, view, cfg.topN);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ReportContext ctx;
  ctx.queryRoot = root;
  ctx.mode = baseline ? "baseline" : "similarity";
  ctx.threshold = params.threshold;
  ctx.margin = params.margin;
  ctx.hashCount = db.family().size();
  ctx.seed = db.family().seed();
  ctx.topN = cfg.topN;
  ctx.excluded = cfg.exclude;
  ctx.skippedQueryFiles = query.skipped;
  if (cfg.stats) ctx.wallSeconds = seconds;

  switch (format) {
    case OutputFormat::Text:
      emit(cfg, renderText(report, ctx, cfg.stats), out);
      break;
    case OutputFormat::Json:
      emit(cfg, renderJson(report, ctx).dump(2) + "\n", out);
      break;
    case OutputFormat::Tsv:
      emit(cfg, renderTsv(report), out);
      break;
  }
  return kOk;
}

int cmdInspect(const Config& cfg, std::ostream& out) {
  requireDb(cfg);
  if (cfg.format != "text" && cfg.format != "json") throw UsageError("inspect supports text or json");
  const SignatureDatabase db = SignatureDatabase::load(cfg.db);
  if (cfg.format == "json") {
    emit(cfg, describeDatabase(db).dump(2) + "\n", out);
  } else {
    emit(cfg, renderInspectText(db), out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Find the corpus components a set of source files was copied from", "oscn"};
  app.require_subcommand(1);

  auto addDb = [&cfg](CLI::App* cmd) {
    cmd->add_option("--db", cfg.db, "Signature database file")->envname("OSCN_DB");
    cmd->add_option("-j,--threads", cfg.threads, "Worker thread cap (0 = all cores)");
  };
  auto addSearch = [&cfg](CLI::App* cmd) {
    cmd->add_option("query_dir", cfg.queryDir, "Directory (or .tar.gz) of query source files");
    cmd->add_option("--files-from", cfg.filesFrom, "File listing query source files, one per line");
    cmd->add_option("--exclude", cfg.exclude, "Glob of component names to leave out (repeatable)");
    cmd->add_option("--top", cfg.topN, "Components shown in the similarity table");
    cmd->add_option("--format", cfg.format, "text, json or tsv");
    cmd->add_option("-o,--output", cfg.output, "Write the report to this file");
    cmd->add_flag("--stats", cfg.stats, "Include prune counts and wall time");
  };

  auto* index = app.add_subcommand("index", "Add components to a signature database");
  addDb(index);
  index->add_option("components", cfg.specs, "Component specs name=path (directory or .tar.gz)");
  index->add_option("--manifest", cfg.manifest, "File with one name=path spec per line");
  index->add_option("--seed", cfg.seed, "Hash family seed (new databases only)");
  index->add_option("--k", cfg.k, "Number of hash functions, a multiple of 64 (new databases only)");
  index->add_flag("--store-tokens", cfg.storeTokens, "Keep token streams for collision-free audits");

  auto* query = app.add_subcommand("query", "Rank components by similarity to the query files");
  addDb(query);
  addSearch(query);
  query->add_option("--th", cfg.threshold, "Similarity threshold in (0, 1]");
  query->add_option("--m", cfg.margin, "Estimator margin");
  query->add_flag("--audit-tokens", cfg.auditTokens, "Exact test on stored token streams");

  auto* baseline = app.add_subcommand("baseline", "Rank components by byte-identical files");
  addDb(baseline);
  addSearch(baseline);

  auto* inspect = app.add_subcommand("inspect", "Show database header, counts and components");
  addDb(inspect);
  inspect->add_option("--format", cfg.format, "text or json");
  inspect->add_option("-o,--output", cfg.output, "Write to this file");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (index->parsed()) return cmdIndex(cfg, out, err);
    if (query->parsed()) return cmdSearch(cfg, false, out);
    if (baseline->parsed()) return cmdSearch(cfg, true, out);
    if (inspect->parsed()) return cmdInspect(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SignatureMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kSearchError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace oscn::cli
