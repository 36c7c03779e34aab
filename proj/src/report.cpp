#include "oscn/report.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "oscn/errors.hpp"

namespace oscn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed3(double v) { return fmt::format("{:.3f}", v); }

std::string cellText(const TableCell& cell) {
  if (!cell.path) return fixed3(cell.similarity);
  return fmt::format("{} ({})", fixed3(cell.similarity), *cell.path);
}

ordered_json scoreJson(const ComponentScore& s) {
  return ordered_json{{"name", s.name},
                      {"score", s.total},
                      {"files", s.fileCount},
                      {"perFile", s.perFile}};
}

std::size_t widestName(const std::vector<ComponentScore>& list) {
  std::size_t w = 0;
  for (const auto& s : list) w = std::max(w, s.name.size());
  return w;
}

}  // namespace

OutputFormat parseOutputFormat(std::string_view name) {
  if (name == "text") return OutputFormat::Text;
  if (name == "json") return OutputFormat::Json;
  if (name == "tsv") return OutputFormat::Tsv;
  throw ConfigError("unknown output format: " + std::string(name));
}

std::string formatScore(double value) {
  std::string s = fixed3(value);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string formatListLine(const ComponentScore& score, std::size_t queryCount, std::size_t nameWidth) {
  return fmt::format("{:<{}}  ({} / {})  {} {}", score.name, nameWidth, formatScore(score.total), queryCount,
                     score.fileCount, score.fileCount == 1 ? "file" : "files");
}

std::string renderText(const ComponentReport& report, const ReportContext& ctx, bool withStats) {
  std::string out;
  auto line = [&out](std::string_view s) {
    out.append(s);
    out.push_back('\n');
  };
  line(fmt::format("Query: {} ({} files, {} search, th={}{})", ctx.queryRoot, report.queryFileCount, ctx.mode,
                   ctx.threshold, ctx.mode == "baseline" ? "" : fmt::format(", m={}", ctx.margin)));
  line("");
  line("Components:");
  if (report.filteredList.empty()) line("    (none)");
  const std::size_t filteredWidth = widestName(report.filteredList);
  for (const auto& s : report.filteredList) line("    " + formatListLine(s, report.queryFileCount, filteredWidth));
  line("");
  line("All components:");
  if (report.fullList.empty()) line("    (none)");
  const std::size_t fullWidth = widestName(report.fullList);
  for (const auto& s : report.fullList) line("    " + formatListLine(s, report.queryFileCount, fullWidth));

  const SimilarityTable& table = report.table;
  if (!table.components.empty()) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"Q"};
    header.insert(header.end(), table.components.begin(), table.components.end());
    grid.push_back(std::move(header));
    for (std::size_t r = 0; r < table.queryFiles.size(); ++r) {
      std::vector<std::string> row{table.queryFiles[r]};
      for (const auto& cell : table.cells[r]) row.push_back(cellText(cell));
      grid.push_back(std::move(row));
    }
    std::vector<std::string> totals{"S_Q(C)"};
    std::vector<std::string> sizes{"|C|"};
    for (std::size_t c = 0; c < table.components.size(); ++c) {
      totals.push_back(fixed3(table.totals[c]));
      sizes.push_back(std::to_string(table.sizes[c]));
    }
    grid.push_back(std::move(totals));
    grid.push_back(std::move(sizes));

    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& row : grid) {
      for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    line("");
    line("Similarity table:");
    for (const auto& row : grid) {
      std::string text = "    ";
      for (std::size_t c = 0; c < row.size(); ++c) {
        text += fmt::format("{:<{}}", row[c], widths[c]);
        if (c + 1 < row.size()) text += "  ";
      }
      while (!text.empty() && text.back() == ' ') text.pop_back();
      line(text);
    }
  }

  line("");
  line("Unmatched query files:");
  if (report.unmatched.empty()) line("    (none)");
  for (const auto& path : report.unmatched) line("    " + path);

  if (withStats) {
    const auto& st = report.stats;
    const double ratio =
        st.pairsConsidered == 0 ? 0.0 : static_cast<double>(st.exactComputed) / static_cast<double>(st.pairsConsidered);
    line("");
    line("Stats:");
    line(fmt::format("    pairs considered   {}", st.pairsConsidered));
    line(fmt::format("    size pruned        {}", st.sizePruned));
    line(fmt::format("    estimate pruned    {}", st.estimatePruned));
    line(fmt::format("    #sim_e passed      {}", st.exactComputed));
    line(fmt::format("    #sim accepted      {}", st.accepted));
    line(fmt::format("    exact ratio        {:.6f}", ratio));
    if (ctx.wallSeconds) line(fmt::format("    wall time          {:.3f} s", *ctx.wallSeconds));
  }
  return out;
}

ordered_json renderJson(const ComponentReport& report, const ReportContext& ctx) {
  ordered_json query{{"root", ctx.queryRoot},
                     {"files", report.table.queryFiles},
                     {"count", report.queryFileCount},
                     {"skipped", ctx.skippedQueryFiles}};
  ordered_json params{{"mode", ctx.mode},
                      {"th", ctx.threshold},
                      {"m", ctx.margin},
                      {"k", ctx.hashCount},
                      {"b", 1},
                      {"seed", ctx.seed},
                      {"top", ctx.topN},
                      {"exclude", ctx.excluded}};

  ordered_json full = ordered_json::array();
  for (const auto& s : report.fullList) full.push_back(scoreJson(s));
  ordered_json filtered = ordered_json::array();
  for (const auto& s : report.filteredList) filtered.push_back(scoreJson(s));

  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < report.table.queryFiles.size(); ++r) {
    ordered_json cells = ordered_json::array();
    for (const auto& cell : report.table.cells[r]) {
      cells.push_back(ordered_json{{"sim", cell.similarity},
                                   {"path", cell.path ? ordered_json(*cell.path) : ordered_json(nullptr)}});
    }
    rows.push_back(ordered_json{{"file", report.table.queryFiles[r]}, {"cells", std::move(cells)}});
  }
  ordered_json table{{"components", report.table.components},
                     {"rows", std::move(rows)},
                     {"totals", report.table.totals},
                     {"sizes", report.table.sizes}};

  const auto& st = report.stats;
  ordered_json stats{{"pairsConsidered", st.pairsConsidered},
                     {"sizePruned", st.sizePruned},
                     {"estimatePruned", st.estimatePruned},
                     {"exactComputed", st.exactComputed},
                     {"accepted", st.accepted}};
  if (ctx.wallSeconds) stats["wallSeconds"] = *ctx.wallSeconds;

  return ordered_json{{"query", std::move(query)},   {"params", std::move(params)},
                      {"full", std::move(full)},     {"filtered", std::move(filtered)},
                      {"table", std::move(table)},   {"unmatched", report.unmatched},
                      {"stats", std::move(stats)}};
}

std::string renderTsv(const ComponentReport& report) {
  const SimilarityTable& table = report.table;
  std::string out = "Q";
  for (const auto& name : table.components) out += "\t" + name;
  out += "\n";
  for (std::size_t r = 0; r < table.queryFiles.size(); ++r) {
    out += table.queryFiles[r];
    for (const auto& cell : table.cells[r]) out += "\t" + cellText(cell);
    out += "\n";
  }
  out += "S_Q(C)";
  for (double t : table.totals) out += "\t" + fixed3(t);
  out += "\n|C|";
  for (std::size_t n : table.sizes) out += "\t" + std::to_string(n);
  out += "\n";
  return out;
}

nlohmann::ordered_json describeDatabase(const SignatureDatabase& db) {
  std::size_t refs = 0;
  for (const auto& c : db.components()) refs += c.fileCount();
  std::uint64_t trigramTotal = 0;
  for (const auto& e : db.entries()) trigramTotal += e.signature.trigramCount;

  ordered_json components = ordered_json::array();
  for (const auto& c : db.components()) {
    components.push_back(ordered_json{{"name", c.name}, {"files", c.fileCount()}});
  }
  return ordered_json{
      {"header",
       {{"format", "OSCN"},
        {"k", db.family().size()},
        {"b", 1},
        {"seed", db.family().seed()},
        {"fingerprint", fmt::format("{:016x}", db.family().fingerprint())},
        {"storesTokens", db.storesTokens()}}},
      {"counts",
       {{"components", db.components().size()},
        {"uniqueFiles", db.entries().size()},
        {"fileReferences", refs},
        {"dedupedReferences", refs - db.entries().size()},
        {"trigrams", trigramTotal}}},
      {"components", std::move(components)}};
}

std::string renderInspectText(const SignatureDatabase& db) {
  const auto info = describeDatabase(db);
  const auto& h = info["header"];
  const auto& n = info["counts"];
  std::string out;
  out += fmt::format("k={} b={} seed={} fingerprint={}{}\n", h["k"].get<std::size_t>(), 1,
                     h["seed"].get<std::uint64_t>(), h["fingerprint"].get<std::string>(),
                     db.storesTokens() ? " tokens=stored" : "");
  out += fmt::format("components: {}\n", n["components"].get<std::size_t>());
  out += fmt::format("unique files: {}\n", n["uniqueFiles"].get<std::size_t>());
  out += fmt::format("file references: {} ({} deduplicated)\n", n["fileReferences"].get<std::size_t>(),
                     n["dedupedReferences"].get<std::size_t>());
  std::size_t width = 0;
  for (const auto& c : db.components()) width = std::max(width, c.name.size());
  for (const auto& c : db.components()) {
    out += fmt::format("    {:<{}}  {} {}\n", c.name, width, c.fileCount(), c.fileCount() == 1 ? "file" : "files");
  }
  return out;
}

}  // namespace oscn
