#include "pctrank/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pctrank {
namespace {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

Document::Document(std::string id, std::int64_t times_cited, std::optional<std::string> source,
                   std::optional<int> year, std::optional<std::string> doc_type)
    : id_(std::move(id)),
      times_cited_(times_cited),
      source_(std::move(source)),
      year_(year),
      doc_type_(std::move(doc_type)) {
  if (id_.empty()) throw std::invalid_argument("document id must be nonempty");
  if (times_cited_ < 0) {
    throw std::invalid_argument("document '" + id_ + "': times cited must be non-negative");
  }
}

std::optional<GroupAttribute> parse_group_attribute(std::string_view name) {
  std::string lowered = ascii_lower(trim(name));
  if (lowered == "source") return GroupAttribute::Source;
  if (lowered == "year") return GroupAttribute::Year;
  if (lowered == "doc_type" || lowered == "doctype") return GroupAttribute::DocType;
  return std::nullopt;
}

std::string_view attribute_name(GroupAttribute attribute) {
  switch (attribute) {
    case GroupAttribute::Source:
      return "source";
    case GroupAttribute::Year:
      return "year";
    case GroupAttribute::DocType:
      return "doc_type";
  }
  return "?";
}

std::string normalize_doc_type(std::string_view doc_type) { return ascii_lower(trim(doc_type)); }

std::string group_value(const Document& doc, GroupAttribute attribute) {
  switch (attribute) {
    case GroupAttribute::Source:
      if (doc.source() && !trim(*doc.source()).empty()) return std::string(trim(*doc.source()));
      break;
    case GroupAttribute::Year:
      if (doc.year()) return std::to_string(*doc.year());
      break;
    case GroupAttribute::DocType:
      if (doc.doc_type() && !trim(*doc.doc_type()).empty()) return normalize_doc_type(*doc.doc_type());
      break;
  }
  return std::string(kUnknownValue);
}

GroupKey::GroupKey(std::vector<Part> parts) : parts_(std::move(parts)) {
  std::set<GroupAttribute> seen;
  for (const auto& [attribute, value] : parts_) {
    if (!seen.insert(attribute).second) {
      throw std::invalid_argument("group key repeats attribute '" +
                                  std::string(attribute_name(attribute)) + "'");
    }
  }
}

GroupKey GroupKey::of(const Document& doc, const std::vector<GroupAttribute>& attributes) {
  std::vector<Part> parts;
  parts.reserve(attributes.size());
  for (GroupAttribute attribute : attributes) parts.emplace_back(attribute, group_value(doc, attribute));
  return GroupKey(std::move(parts));
}

std::string GroupKey::to_string() const {
  if (parts_.empty()) return "(all)";
  std::string out;
  for (const auto& [attribute, value] : parts_) {
    if (!out.empty()) out += ';';
    out += attribute_name(attribute);
    out += '=';
    out += value;
  }
  return out;
}

ReferenceSet::ReferenceSet(GroupKey key, std::vector<Document> members)
    : key_(std::move(key)), members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("reference set must have at least one member");
  for (const Document& doc : members_) {
    for (const auto& [attribute, value] : key_.parts()) {
      if (group_value(doc, attribute) != value) {
        throw std::invalid_argument("document '" + doc.id() + "' does not match group key " +
                                    key_.to_string());
      }
    }
  }
}

std::optional<CountingRule> parse_counting_rule(std::string_view text) {
  std::string lowered = ascii_lower(trim(text));
  if (lowered == "lb") return CountingRule::CitedLess;
  if (lowered == "rousseau") return CountingRule::CitedLessOrEqual;
  if (lowered == "mid") return CountingRule::Midpoint;
  return std::nullopt;
}

std::string_view rule_flag(CountingRule rule) {
  switch (rule) {
    case CountingRule::CitedLess:
      return "lb";
    case CountingRule::CitedLessOrEqual:
      return "rousseau";
    case CountingRule::Midpoint:
      return "mid";
  }
  return "?";
}

UncertaintyInterval::UncertaintyInterval(Rational lo, Rational hi) : lo_(lo), hi_(hi) {
  if (lo_ < Rational(0) || hi_ > Rational(100) || !(lo_ < hi_)) {
    throw std::invalid_argument("uncertainty interval must satisfy 0 <= lo < hi <= 100, got [" +
                                lo_.to_string() + ", " + hi_.to_string() + "]");
  }
}

const Rational& QuantileResult::percentile(CountingRule rule) const {
  switch (rule) {
    case CountingRule::CitedLess:
      return p_cited_less;
    case CountingRule::CitedLessOrEqual:
      return p_cited_leq;
    case CountingRule::Midpoint:
      break;
  }
  return p_midpoint;
}

SchemeError::SchemeError(const std::string& message, std::size_t line)
    : std::invalid_argument(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::optional<SchemeProblem> ClassScheme::validate(const std::vector<ClassDef>& classes) {
  if (classes.empty()) return SchemeProblem{0, "scheme has no classes"};
  const Rational zero(0);
  const Rational hundred(100);
  if (classes.front().lower != zero) {
    return SchemeProblem{0, "gap at 0: first class starts at " + classes.front().lower.to_string()};
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const ClassDef& c = classes[i];
    if (!(c.lower < c.upper)) {
      return SchemeProblem{i, "class '" + c.label + "' is empty or reversed: [" +
                                  c.lower.to_string() + ", " + c.upper.to_string() + ")"};
    }
    if (c.value <= 0) return SchemeProblem{i, "class '" + c.label + "' has non-positive value"};
    if (i > 0) {
      const ClassDef& prev = classes[i - 1];
      if (prev.upper < c.lower) return SchemeProblem{i, "gap at " + prev.upper.to_string()};
      if (c.lower < prev.upper) return SchemeProblem{i, "overlap at " + c.lower.to_string()};
      if (c.value <= prev.value) {
        return SchemeProblem{i, "values not increasing at class '" + c.label + "'"};
      }
    }
  }
  if (classes.back().upper != hundred) {
    return SchemeProblem{classes.size() - 1, "gap at " + classes.back().upper.to_string() +
                                                 ": last class must end at 100"};
  }
  return std::nullopt;
}

ClassScheme::ClassScheme(std::string name, std::vector<ClassDef> classes)
    : name_(std::move(name)), classes_(std::move(classes)) {
  if (auto problem = validate(classes_)) throw SchemeError(problem->message);
}

std::string_view method_name(WilcoxonMethod method) {
  return method == WilcoxonMethod::Exact ? "exact" : "normal";
}

}  // namespace pctrank
