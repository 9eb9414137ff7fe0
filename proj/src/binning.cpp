#include "pctrank/binning.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pctrank {
namespace {

std::string_view trim(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

ClassScheme pr6_scheme() {
  return ClassScheme("pr6", {
                                {"bottom-50%", 0, 50, 1},
                                {"top-50%", 50, 75, 2},
                                {"top-25%", 75, 90, 3},
                                {"top-10%", 90, 95, 4},
                                {"top-5%", 95, 99, 5},
                                {"top-1%", 99, 100, 6},
                            });
}

ClassScheme quartile_scheme() {
  return ClassScheme("quartiles", {
                                      {"Q1", 0, 25, 1},
                                      {"Q2", 25, 50, 2},
                                      {"Q3", 50, 75, 3},
                                      {"Q4", 75, 100, 4},
                                  });
}

ClassAttribution fractional_attribution(const UncertaintyInterval& interval,
                                        const ClassScheme& scheme) {
  ClassAttribution out;
  out.fractions.reserve(scheme.size());
  const Rational width = interval.width();
  for (const ClassDef& c : scheme.classes()) {
    Rational lo = std::max(interval.lo(), c.lower);
    Rational hi = std::min(interval.hi(), c.upper);
    Rational fraction = lo < hi ? (hi - lo) / width : Rational(0);
    out.score += fraction * c.value;
    out.fractions.push_back(fraction);
  }
  out.rounded_index = rounded_class_index(out.score, scheme);
  out.rounded_value = scheme.classes()[out.rounded_index].value;
  return out;
}

const ClassDef& point_attribution(const Rational& p, const ClassScheme& scheme) {
  if (p < Rational(0) || p > Rational(100)) {
    throw std::out_of_range("percentile " + p.to_string() + " outside [0,100]");
  }
  const auto& classes = scheme.classes();
  // First class whose upper bound exceeds p; p == 100 lands in the last one.
  auto it = std::upper_bound(classes.begin(), classes.end(), p,
                             [](const Rational& value, const ClassDef& c) { return value < c.upper; });
  return it == classes.end() ? classes.back() : *it;
}

Rational scheme_expected_value(const ClassScheme& scheme) {
  Rational sum;
  for (const ClassDef& c : scheme.classes()) sum += (c.upper - c.lower) * c.value;
  return sum / 100;
}

std::size_t rounded_class_index(const Rational& score, const ClassScheme& scheme) {
  if (score < Rational(scheme.min_value()) || score > Rational(scheme.max_value())) {
    throw std::out_of_range("score " + score.to_string() + " outside scheme value range [" +
                            std::to_string(scheme.min_value()) + ", " +
                            std::to_string(scheme.max_value()) + "]");
  }
  const std::int64_t target = score.round_half_away();
  const auto& classes = scheme.classes();
  std::size_t best = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].value == target) return i;
    Rational gap = (score - classes[i].value).abs();
    Rational best_gap = (score - classes[best].value).abs();
    if (gap <= best_gap) best = i;
  }
  return best;
}

const ClassDef& rounded_class(const Rational& score, const ClassScheme& scheme) {
  return scheme.classes()[rounded_class_index(score, scheme)];
}

ClassScheme load_scheme(std::string_view definition, std::string name) {
  std::vector<ClassDef> classes;
  std::vector<std::size_t> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= definition.size()) {
    std::size_t end = definition.find('\n', start);
    if (end == std::string_view::npos) end = definition.size();
    std::string_view line = trim(definition.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_commas(line);
    if (fields.size() != 4) {
      throw SchemeError("expected label,lower,upper,value but found " +
                            std::to_string(fields.size()) + " fields",
                        line_no);
    }
    if (fields[0].empty()) throw SchemeError("empty class label", line_no);
    ClassDef c;
    c.label = std::string(fields[0]);
    try {
      c.lower = Rational::parse_decimal(fields[1]);
      c.upper = Rational::parse_decimal(fields[2]);
    } catch (const std::exception& e) {
      throw SchemeError(e.what(), line_no);
    }
    std::string_view value = fields[3];
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), c.value);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw SchemeError("class value must be an integer, got '" + std::string(value) + "'", line_no);
    }
    classes.push_back(std::move(c));
    lines.push_back(line_no);
  }
  if (auto problem = ClassScheme::validate(classes)) {
    std::size_t line = problem->class_index < lines.size() ? lines[problem->class_index] : line_no;
    throw SchemeError(problem->message, line);
  }
  return ClassScheme(std::move(name), std::move(classes));
}

ClassScheme load_scheme_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemeError("cannot read scheme file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scheme(buffer.str(), path.stem().string());
}

std::string format_scheme(const ClassScheme& scheme) {
  std::string out = "# " + scheme.name() + "\n";
  for (const ClassDef& c : scheme.classes()) {
    out += c.label + "," + c.lower.to_string() + "," + c.upper.to_string() + "," +
           std::to_string(c.value) + "\n";
  }
  return out;
}

Rational aggregate_quantile_sum(std::span<const QuantileResult> results, CountingRule rule) {
  Rational sum;
  for (const QuantileResult& r : results) sum += r.percentile(rule);
  return sum;
}

}  // namespace pctrank
