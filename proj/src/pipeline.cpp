#include "pctrank/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "pctrank/binning.hpp"
#include "pctrank/quantile.hpp"
#include "pctrank/stats.hpp"

namespace pctrank {
namespace {

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string describe(const WilcoxonResult& w) {
  std::string out = "n_nonzero=" + std::to_string(w.n_nonzero) + " w_plus=" + fixed(w.w_plus, 1) +
                    " w_minus=" + fixed(w.w_minus, 1);
  if (w.statistic_z) out += " z=" + fixed(*w.statistic_z, 6);
  out += " p=" + fixed(w.p_two_sided, 6) + " method=" + std::string(method_name(w.method));
  return out;
}

struct SetOutput {
  std::vector<QuantileResult> results;
  std::vector<ClassAttribution> attributions;
  std::vector<Rational> scores;
  GroupSummary summary;
};

GroupSummary summarize(const GroupKey& key, std::span<const QuantileResult> results,
                       std::span<const Rational> scores, const ClassScheme& scheme,
                       CountingRule rule) {
  GroupSummary s;
  s.key = key;
  s.n = results.size();
  s.quantile_sum = aggregate_quantile_sum(results, rule);
  s.mean_midpoint = aggregate_quantile_sum(results, CountingRule::Midpoint) /
                    Rational(static_cast<std::int64_t>(s.n));
  s.vs_median = test_percentiles_vs_median(results, rule);
  s.vs_baseline = test_scores_vs_baseline(scores, scheme);
  return s;
}

SetOutput process_set(const ReferenceSet& set, const ClassScheme& scheme,
                      const OutputOptions& options) {
  SetOutput out;
  out.results = quantile_reference_set(set);
  out.attributions.reserve(out.results.size());
  out.scores.reserve(out.results.size());
  for (const QuantileResult& r : out.results) {
    ClassAttribution a = fractional_attribution(r.interval, scheme);
    out.scores.push_back(options.fractional
                             ? a.score
                             : Rational(point_attribution(r.percentile(options.rule), scheme).value));
    out.attributions.push_back(std::move(a));
  }
  out.summary = summarize(set.key(), out.results, out.scores, scheme, options.rule);
  return out;
}

void write_block(std::ostream& out, const std::string& title, const GroupSummary& s,
                 const OutputOptions& options) {
  out << title << "\n";
  out << "  n: " << s.n << "\n";
  out << "  quantile_sum: " << s.quantile_sum.to_fixed(kPercentDigits) << "\n";
  out << "  mean_midpoint: " << s.mean_midpoint.to_fixed(kPercentDigits) << "\n";
  out << "  wilcoxon_vs_50 (" << rule_flag(options.rule) << "): " << describe(s.vs_median) << "\n";
  out << "  wilcoxon_vs_baseline: " << describe(s.vs_baseline) << "\n";
  if (s.n == 1) out << "  flag: high uncertainty (n=1, interval width 100)\n";
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  writer(file);
  file.flush();
  if (!file) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

ClassScheme resolve_scheme(const std::string& name_or_path) {
  if (name_or_path == "pr6") return pr6_scheme();
  if (name_or_path == "quartiles") return quartile_scheme();
  return load_scheme_file(name_or_path);
}

BatchResult process_batch(std::span<const Document> documents,
                          const std::vector<GroupAttribute>& group_by, const ClassScheme& scheme,
                          const OutputOptions& options, std::size_t jobs) {
  std::map<GroupKey, std::vector<std::size_t>> index_by_key;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    index_by_key[GroupKey::of(documents[i], group_by)].push_back(i);
  }
  std::vector<ReferenceSet> sets;
  std::vector<const std::vector<std::size_t>*> positions;
  for (const auto& [key, indices] : index_by_key) {
    std::vector<Document> members;
    members.reserve(indices.size());
    for (std::size_t i : indices) members.push_back(documents[i]);
    sets.emplace_back(key, std::move(members));
    positions.push_back(&indices);
  }

  std::vector<SetOutput> outputs(sets.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(sets.size(), 1));
  if (jobs <= 1) {
    for (std::size_t s = 0; s < sets.size(); ++s) outputs[s] = process_set(sets[s], scheme, options);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t s = next++; s < sets.size(); s = next++) {
          outputs[s] = process_set(sets[s], scheme, options);
        }
      });
    }
  }

  BatchResult batch;
  batch.results.resize(documents.size());
  batch.attributions.resize(documents.size());
  batch.scheme_scores.resize(documents.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& indices = *positions[s];
    for (std::size_t k = 0; k < indices.size(); ++k) {
      batch.results[indices[k]] = std::move(outputs[s].results[k]);
      batch.attributions[indices[k]] = std::move(outputs[s].attributions[k]);
      batch.scheme_scores[indices[k]] = outputs[s].scores[k];
    }
    batch.groups.push_back(std::move(outputs[s].summary));
  }
  if (!documents.empty()) {
    batch.batch = summarize(GroupKey(), batch.results, batch.scheme_scores, scheme, options.rule);
  }
  return batch;
}

void write_results_csv(std::span<const QuantileResult> results,
                       std::span<const ClassAttribution> attributions, const ClassScheme& scheme,
                       const OutputOptions& options, std::ostream& out) {
  if (results.size() != attributions.size()) {
    throw std::invalid_argument("results and attributions are not aligned");
  }
  out << "id,group,tc,n,below,tied,p_lb,p_mid,p_rousseau,interval_lo,interval_hi,scheme_score,"
         "scheme_class";
  for (std::size_t k = 1; k <= scheme.size(); ++k) out << ",frac_" << k;
  out << "\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const QuantileResult& r = results[i];
    const ClassAttribution& a = attributions[i];
    const std::int64_t scheme_class =
        options.fractional ? a.rounded_value
                           : point_attribution(r.percentile(options.rule), scheme).value;
    out << csv_escape(r.document_id) << ',' << csv_escape(r.group.to_string()) << ','
        << r.times_cited << ',' << r.n << ',' << r.below << ',' << r.tied << ','
        << r.p_cited_less.to_fixed(kPercentDigits) << ',' << r.p_midpoint.to_fixed(kPercentDigits)
        << ',' << r.p_cited_leq.to_fixed(kPercentDigits) << ','
        << r.interval.lo().to_fixed(kPercentDigits) << ','
        << r.interval.hi().to_fixed(kPercentDigits) << ',' << a.score.to_fixed(options.score_digits)
        << ',' << scheme_class;
    for (const Rational& f : a.fractions) out << ',' << f.to_fixed(kPercentDigits);
    out << "\n";
  }
}

void write_results_csv(std::span<const QuantileResult> results,
                       std::span<const ClassAttribution> attributions, const ClassScheme& scheme,
                       const OutputOptions& options, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) {
    write_results_csv(results, attributions, scheme, options, out);
  });
}

void write_summary(const BatchResult& batch, const ClassScheme& scheme,
                   const OutputOptions& options, const ParseReport& report, std::ostream& out) {
  out << "percentile rank summary\n";
  out << "rule: " << rule_flag(options.rule) << "\n";
  out << "scheme: " << scheme.name() << " (" << scheme.size() << " classes)\n";
  out << "scheme_baseline: " << scheme_expected_value(scheme).to_fixed(2) << "\n";
  out << "scheme_class: " << (options.fractional ? "rounded fractional score" : "point attribution")
      << "\n";
  out << "wilcoxon: two-sided, zero differences dropped, exact for n_nonzero<=" << kExactMaxN
      << " without tied ranks, otherwise normal approximation with continuity correction "
      << fixed(kContinuityCorrection, 1) << "\n";
  out << "records_read: " << report.records_read << "\n";
  out << "documents: " << batch.results.size() << "\n";
  out << "parse_warnings: " << report.warnings.size() << "\n";
  out << "parse_errors: " << report.errors.size() << "\n";
  out << "groups: " << batch.groups.size() << "\n";
  for (std::size_t g = 0; g < batch.groups.size(); ++g) {
    out << "\n";
    write_block(out, "group " + std::to_string(g + 1) + ": " + batch.groups[g].key.to_string(),
                batch.groups[g], options);
  }
  out << "\n";
  write_block(out, "batch: all documents", batch.batch, options);
}

void write_summary(const BatchResult& batch, const ClassScheme& scheme,
                   const OutputOptions& options, const ParseReport& report,
                   const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_summary(batch, scheme, options, report, out); });
}

void write_diagnostics(const ParseReport& report, std::ostream& diag) {
  std::vector<std::pair<const Diagnostic*, const char*>> all;
  for (const auto& d : report.warnings) all.emplace_back(&d, "warning");
  for (const auto& d : report.errors) all.emplace_back(&d, "error");
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first->line < b.first->line; });
  for (const auto& [d, kind] : all) diag << "LINE " << d->line << ": " << kind << ": " << d->message << "\n";
}

int run_pipeline(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  std::optional<ClassScheme> scheme;
  try {
    scheme = resolve_scheme(config.scheme);
  } catch (const SchemeError& e) {
    diag << "error: invalid scheme: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (config.score_digits < 0 || config.score_digits > 18) {
    diag << "error: precision must be between 0 and 18\n";
    return kExitConfigError;
  }

  std::ifstream in(config.input, std::ios::binary);
  if (!in) {
    diag << "error: cannot read input " << config.input.string() << "\n";
    return kExitInputError;
  }
  ParseOutput parsed;
  try {
    parsed = config.format == InputFormat::Wos
                 ? parse_wos(in)
                 : parse_csv(in, config.csv_id, config.csv_tc, config.csv_group);
  } catch (const IngestError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  write_diagnostics(parsed.report, diag);
  if (parsed.documents.empty()) {
    diag << "error: no documents in " << config.input.string() << "\n";
    return kExitInputError;
  }

  const OutputOptions options{config.rule, config.fractional, config.score_digits};
  BatchResult batch = process_batch(parsed.documents, config.group_by, *scheme, options, config.jobs);

  try {
    if (config.results_path) {
      write_results_csv(batch.results, batch.attributions, *scheme, options, *config.results_path);
    } else {
      write_results_csv(batch.results, batch.attributions, *scheme, options, out);
    }
    if (config.summary_path) {
      write_summary(batch, *scheme, options, parsed.report, *config.summary_path);
    }
  } catch (const std::runtime_error& e) {
    diag << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace pctrank
