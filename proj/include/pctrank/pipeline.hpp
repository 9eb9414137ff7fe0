#pragma once

// Batch conversion: ingest -> group -> percentiles -> class attribution ->
// significance tests, plus the writers for the results table and summary.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pctrank/ingest.hpp"
#include "pctrank/model.hpp"

namespace pctrank {

enum class InputFormat { Wos, Csv };

inline constexpr int kPercentDigits = 6;
inline constexpr int kDefaultScoreDigits = 2;

struct RunConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::Wos;
  CountingRule rule = CountingRule::Midpoint;
  std::string scheme = "pr6";  // "pr6", "quartiles" or a scheme file path
  std::vector<GroupAttribute> group_by = {GroupAttribute::Source, GroupAttribute::Year,
                                          GroupAttribute::DocType};
  bool fractional = true;
  std::optional<std::filesystem::path> results_path;  // results go to `out` when unset
  std::optional<std::filesystem::path> summary_path;
  std::string csv_id = "id";
  std::string csv_tc = "tc";
  std::vector<std::string> csv_group;
  int score_digits = kDefaultScoreDigits;
  std::size_t jobs = 1;  // 0 = one per hardware thread
};

enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitConfigError = 2 };

struct OutputOptions {
  CountingRule rule = CountingRule::Midpoint;
  bool fractional = true;  // false: scheme_class is the class of the rule's percentile
  int score_digits = kDefaultScoreDigits;
};

struct GroupSummary {
  GroupKey key;
  std::size_t n = 0;
  Rational quantile_sum;  // selected rule
  Rational mean_midpoint;
  WilcoxonResult vs_median;
  WilcoxonResult vs_baseline;
};

struct BatchResult {
  // Aligned, in input document order.
  std::vector<QuantileResult> results;
  std::vector<ClassAttribution> attributions;
  std::vector<Rational> scheme_scores;  // fractional score, or point class value
  // Ordered by group key.
  std::vector<GroupSummary> groups;
  GroupSummary batch;
};

// "pr6", "quartiles", or a path to a scheme file. Throws SchemeError.
ClassScheme resolve_scheme(const std::string& name_or_path);

// Processes every reference set, on up to `jobs` worker threads. The result
// does not depend on `jobs`.
BatchResult process_batch(std::span<const Document> documents,
                          const std::vector<GroupAttribute>& group_by, const ClassScheme& scheme,
                          const OutputOptions& options, std::size_t jobs = 1);

void write_results_csv(std::span<const QuantileResult> results,
                       std::span<const ClassAttribution> attributions, const ClassScheme& scheme,
                       const OutputOptions& options, std::ostream& out);
// Throws std::runtime_error when the path cannot be written.
void write_results_csv(std::span<const QuantileResult> results,
                       std::span<const ClassAttribution> attributions, const ClassScheme& scheme,
                       const OutputOptions& options, const std::filesystem::path& path);

void write_summary(const BatchResult& batch, const ClassScheme& scheme,
                   const OutputOptions& options, const ParseReport& report, std::ostream& out);
void write_summary(const BatchResult& batch, const ClassScheme& scheme,
                   const OutputOptions& options, const ParseReport& report,
                   const std::filesystem::path& path);

// `LINE <n>: warning: ...` / `LINE <n>: error: ...`, one per line.
void write_diagnostics(const ParseReport& report, std::ostream& diag);

// Runs the whole conversion. Nothing is written unless the input yields at
// least one document and the scheme resolves.
int run_pipeline(const RunConfig& config, std::ostream& out, std::ostream& diag);

}  // namespace pctrank
