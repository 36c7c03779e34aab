#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "oscn/corpus.hpp"
#include "oscn/ranking.hpp"

namespace oscn {

enum class OutputFormat { Text, Json, Tsv };

OutputFormat parseOutputFormat(std::string_view name);

struct ReportContext {
  std::string queryRoot;
  std::string mode = "similarity";  // or "baseline"
  double threshold = 0.0;
  double margin = 0.0;
  std::size_t hashCount = 0;
  std::uint64_t seed = 0;
  std::size_t topN = kDefaultTopN;
  std::vector<std::string> excluded;
  std::vector<std::string> skippedQueryFiles;
  std::optional<double> wallSeconds;  // set only when timing was requested
};

/// Similarity or score with three decimals, trailing zeros trimmed: 3.800 -> "3.8".
std::string formatScore(double value);

/// "Y-0.2  (3.8 / 5)  5 files"
std::string formatListLine(const ComponentScore& score, std::size_t queryCount, std::size_t nameWidth);

std::string renderText(const ComponentReport& report, const ReportContext& ctx, bool withStats);
nlohmann::ordered_json renderJson(const ComponentReport& report, const ReportContext& ctx);
/// Similarity table: one row per query file, one column per component,
/// cells "0.995 (inflate.c)", footer rows S_Q(C) and |C|.
std::string renderTsv(const ComponentReport& report);

nlohmann::ordered_json describeDatabase(const SignatureDatabase& db);
std::string renderInspectText(const SignatureDatabase& db);

}  // namespace oscn
