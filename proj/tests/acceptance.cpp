// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "pctrank/binning.hpp"
#include "pctrank/ingest.hpp"
#include "pctrank/pipeline.hpp"
#include "pctrank/quantile.hpp"
#include "pctrank/stats.hpp"

using namespace pctrank;
namespace fs = std::filesystem;

namespace {

constexpr double kOracleTolerance = 1e-3;
constexpr double kExactVsNormalTolerance = 0.02;
constexpr std::size_t kRandomSets = 500;
constexpr std::size_t kMaxSetSize = 200;
constexpr std::size_t kAttributionPairs = 1000;
constexpr std::size_t kIntegrationPoints = 100000;
constexpr std::size_t kWilcoxonCases = 200;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ReferenceSet iota_set(std::int64_t n) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  std::iota(counts.begin(), counts.end(), 0);
  return oracle::make_set(counts);
}

// The 500 reference sets shared by criteria 5 and 6.
std::vector<std::vector<std::int64_t>> random_count_sets() {
  std::mt19937_64 rng(5062012);
  std::uniform_int_distribution<std::size_t> size(1, kMaxSetSize);
  std::vector<std::vector<std::int64_t>> sets;
  for (std::size_t i = 0; i < kRandomSets; ++i) sets.push_back(oracle::zero_inflated_geometric(rng, size(rng)));
  return sets;
}

Outcome worked_example() {
  auto results = quantile_reference_set(iota_set(8));
  const QuantileResult& top = results.back();
  Outcome o;
  o.pass = top.p_cited_less == Rational(175, 2) && top.p_cited_leq == Rational(100) &&
           top.p_midpoint == Rational(375, 4);
  o.detail = "p_lb=" + top.p_cited_less.to_string() + " p_rousseau=" + top.p_cited_leq.to_string() +
             " p_mid=" + top.p_midpoint.to_string();
  return o;
}

Outcome fractional_pr6() {
  ClassAttribution a = fractional_attribution(UncertaintyInterval(Rational(175, 2), 100), pr6_scheme());
  const Rational w(25, 2);
  const std::vector<Rational> expected = {0, 0, Rational(5, 2) / w, Rational(5) / w, Rational(4) / w,
                                          Rational(1) / w};
  Outcome o;
  o.pass = a.fractions == expected && a.score == Rational(428, 100) && a.rounded_value == 4;
  o.detail = "score=" + a.score.to_string() + " class=" + std::to_string(a.rounded_value);
  return o;
}

Outcome counting_rules() {
  auto set = iota_set(10);
  Rational lb = percentile(set, 9, CountingRule::CitedLess);
  Rational rousseau = percentile(set, 9, CountingRule::CitedLessOrEqual);
  return {lb == Rational(90) && rousseau == Rational(100),
          "cited-less=" + lb.to_string() + " cited-less-or-equal=" + rousseau.to_string()};
}

Outcome baseline() {
  Rational value = scheme_expected_value(pr6_scheme());
  return {value == Rational(191, 100), "PR6 expected value=" + value.to_string()};
}

Outcome width_law(const std::vector<std::vector<std::int64_t>>& sets) {
  std::size_t checked = 0;
  for (const auto& counts : sets) {
    const auto n = static_cast<std::int64_t>(counts.size());
    auto results = quantile_reference_set(oracle::make_set(counts));
    for (std::size_t i = 0; i < counts.size(); ++i) {
      auto brute = oracle::brute_counts(counts, counts[i]);
      const Rational width = results[i].interval.width();
      const Rational expected = brute.tied == 1 ? Rational(100, n)
                                                : Rational(100 * static_cast<std::int64_t>(brute.tied), n);
      if (width != expected || results[i].tied != brute.tied) {
        return {false, "set of " + std::to_string(n) + ", member " + std::to_string(i) +
                           ": width " + width.to_string() + " expected " + expected.to_string()};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " members in " + std::to_string(sets.size()) + " sets"};
}

Outcome mean_is_fifty(const std::vector<std::vector<std::int64_t>>& sets) {
  for (const auto& counts : sets) {
    auto results = quantile_reference_set(oracle::make_set(counts));
    Rational mean = aggregate_quantile_sum(results, CountingRule::Midpoint) /
                    Rational(static_cast<std::int64_t>(counts.size()));
    if (mean != Rational(50)) {
      return {false, "set of " + std::to_string(counts.size()) + " has mean " + mean.to_string()};
    }
  }
  return {true, std::to_string(sets.size()) + " sets"};
}

Outcome attribution_oracle() {
  std::mt19937_64 rng(87512);
  std::vector<ClassScheme> fixed = {pr6_scheme(), quartile_scheme()};
  double worst = 0;
  for (std::size_t trial = 0; trial < kAttributionPairs; ++trial) {
    ClassScheme scheme = trial % 4 < 2 ? fixed[trial % 4] : oracle::random_scheme(rng);
    UncertaintyInterval interval = oracle::random_interval(rng);
    const double score = fractional_attribution(interval, scheme).score.to_double();
    const double integrated = oracle::integrate_scheme_value(
        scheme, interval.lo().to_double(), interval.hi().to_double(), kIntegrationPoints);
    worst = std::max(worst, std::abs(score - integrated));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max |score - oracle| = %.3g over %zu pairs", worst,
                kAttributionPairs);
  return {worst <= kOracleTolerance, detail};
}

Outcome wilcoxon_exactness() {
  std::mt19937_64 rng(19112011);
  std::uniform_int_distribution<std::size_t> size(1, kExactMaxN);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  std::size_t enumerated = 0;
  std::size_t compared = 0;
  double worst = 0;
  for (std::size_t trial = 0; trial < kWilcoxonCases; ++trial) {
    const std::size_t n = size(rng);
    std::normal_distribution<double> noise(shift(rng), 1.0);
    std::vector<double> values;
    while (values.size() < n) {
      double v = noise(rng);
      bool clash = v == 0;
      for (double u : values) clash = clash || std::abs(u) == std::abs(v);
      if (!clash) values.push_back(v);
    }
    WilcoxonResult r = wilcoxon_signed_rank(values, 0.0);
    if (r.method != WilcoxonMethod::Exact || !r.p_exact) {
      return {false, "tie-free sample of " + std::to_string(n) + " did not use the exact method"};
    }
    if (n <= 12) {
      Rational expected = oracle::enumerate_two_sided_p(n, oracle::direct_w_plus(values));
      if (*r.p_exact != expected) {
        return {false, "n=" + std::to_string(n) + ": DP p " + r.p_exact->to_string() +
                           " != enumeration " + expected.to_string()};
      }
      ++enumerated;
    }
    if (n >= 10) {
      const double normal = normal_approx(n, r.w_plus).p_two_sided;
      worst = std::max(worst, std::abs(normal - r.p_two_sided));
      ++compared;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%zu exact-vs-enumeration matches; max |exact - normal| = %.4f over %zu samples",
                enumerated, worst, compared);
  return {worst <= kExactVsNormalTolerance && enumerated > 0 && compared > 0, detail};
}

Outcome parser_fixture() {
  const std::string text = slurp(fs::path(PCTRANK_FIXTURE_DIR) / "five_records.wos");
  ParseOutput first = parse_wos(std::string_view(text));
  ParseOutput second = parse_wos(std::string_view(text));
  const bool counts = first.documents.size() == 5 && first.report.warnings.size() == 1 &&
                      first.report.errors.empty();
  const bool same = first.documents == second.documents && first.report == second.report;

  std::ostringstream out_a;
  std::ostringstream out_b;
  std::ostringstream diag;
  OutputOptions options;
  for (auto* out : {&out_a, &out_b}) {
    ParseOutput parsed = parse_wos(std::string_view(text));
    BatchResult batch = process_batch(parsed.documents, {GroupAttribute::Source, GroupAttribute::Year,
                                                         GroupAttribute::DocType},
                                      pr6_scheme(), options);
    write_results_csv(batch.results, batch.attributions, pr6_scheme(), options, *out);
    write_summary(batch, pr6_scheme(), options, parsed.report, *out);
  }
  const bool bytes = out_a.str() == out_b.str();
  return {counts && same && bytes,
          std::to_string(first.documents.size()) + " documents, " +
              std::to_string(first.report.warnings.size()) + " warning(s), " +
              std::to_string(first.report.errors.size()) + " error(s), reruns " +
              (same && bytes ? "identical" : "differ")};
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("pctrank_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string input = (fs::path(PCTRANK_FIXTURE_DIR) / "n8.wos").string();
  std::vector<std::string> results;
  std::vector<std::string> summaries;
  for (const char* jobs : {"1", "8", "1", "8"}) {
    const fs::path out = dir / "results.csv";
    const fs::path summary = dir / "summary.txt";
    const std::string command = std::string("\"") + PCTRANK_CLI_PATH + "\" --input \"" + input +
                                "\" --jobs " + jobs + " --out \"" + out.string() + "\" --summary \"" +
                                summary.string() + "\" 2>/dev/null";
    const int status = std::system(command.c_str());
    if (status == -1 || WEXITSTATUS(status) != 0) {
      fs::remove_all(dir);
      return {false, "CLI exited with status " + std::to_string(WEXITSTATUS(status))};
    }
    results.push_back(slurp(out));
    summaries.push_back(slurp(summary));
  }
  fs::remove_all(dir);
  bool identical = true;
  for (std::size_t i = 1; i < results.size(); ++i) {
    identical = identical && results[i] == results[0] && summaries[i] == summaries[0];
  }
  std::istringstream lines(results[0]);
  std::string header;
  std::string top;
  std::getline(lines, header);
  std::getline(lines, top);
  const bool values = top.find("93.75") != std::string::npos && top.find(",4.28,") != std::string::npos;
  return {identical && values, "4 runs (1 and 8 workers) " + std::string(identical ? "identical" : "differ") +
                                   "; top row: " + top};
}

}  // namespace

int main() {
  const auto sets = random_count_sets();
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "worked example, n=8 top document", worked_example},
      {2, "fractional PR6 score of [87.5,100]", fractional_pr6},
      {3, "counting-rule dispute, n=10 top document", counting_rules},
      {4, "PR6 random-attribution baseline", baseline},
      {5, "interval width law", [&] { return width_law(sets); }},
      {6, "mean midpoint is 50", [&] { return mean_is_fifty(sets); }},
      {7, "fractional attribution vs numeric integration", attribution_oracle},
      {8, "Wilcoxon exact distribution and normal agreement", wilcoxon_exactness},
      {9, "field-tagged parser fixture", parser_fixture},
      {10, "end-to-end CLI determinism", cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
