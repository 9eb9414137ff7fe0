#pragma once

// Domain types shared by the percentile pipeline. Everything here is an
// immutable value once constructed; constructors reject invalid states.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pctrank/rational.hpp"

namespace pctrank {

// Placeholder used in group keys for a missing attribute.
inline constexpr std::string_view kUnknownValue = "(unknown)";

class Document {
 public:
  Document(std::string id, std::int64_t times_cited,
           std::optional<std::string> source = std::nullopt,
           std::optional<int> year = std::nullopt,
           std::optional<std::string> doc_type = std::nullopt);

  const std::string& id() const { return id_; }
  std::int64_t times_cited() const { return times_cited_; }
  const std::optional<std::string>& source() const { return source_; }
  const std::optional<int>& year() const { return year_; }
  // Original casing, as read.
  const std::optional<std::string>& doc_type() const { return doc_type_; }

  friend bool operator==(const Document&, const Document&) = default;

 private:
  std::string id_;
  std::int64_t times_cited_;
  std::optional<std::string> source_;
  std::optional<int> year_;
  std::optional<std::string> doc_type_;
};

enum class GroupAttribute { Source, Year, DocType };

// Accepts "source", "year", "doc_type" and "doctype" (case-insensitive).
std::optional<GroupAttribute> parse_group_attribute(std::string_view name);
std::string_view attribute_name(GroupAttribute attribute);

// Trimmed, ASCII-lowercased document type used for grouping.
std::string normalize_doc_type(std::string_view doc_type);

// The value `doc` contributes to a key on `attribute`; kUnknownValue when absent.
std::string group_value(const Document& doc, GroupAttribute attribute);

class GroupKey {
 public:
  using Part = std::pair<GroupAttribute, std::string>;

  GroupKey() = default;
  explicit GroupKey(std::vector<Part> parts);

  // Key of `doc` over the given attributes, in the given order.
  static GroupKey of(const Document& doc, const std::vector<GroupAttribute>& attributes);

  const std::vector<Part>& parts() const { return parts_; }

  // "source=J Informetr;year=2010;doc_type=review", or "(all)" when empty.
  std::string to_string() const;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;

 private:
  std::vector<Part> parts_;
};

class ReferenceSet {
 public:
  ReferenceSet(GroupKey key, std::vector<Document> members);

  const GroupKey& key() const { return key_; }
  const std::vector<Document>& members() const { return members_; }
  std::size_t n() const { return members_.size(); }

 private:
  GroupKey key_;
  std::vector<Document> members_;
};

enum class CountingRule {
  CitedLess,         // share of members cited strictly less
  CitedLessOrEqual,  // includes the document's own tie block
  Midpoint,          // half of the tie block; the default
};

// "lb", "rousseau", "mid".
std::optional<CountingRule> parse_counting_rule(std::string_view text);
std::string_view rule_flag(CountingRule rule);

// Span of percent points a document's rank can occupy; lo < hi always.
class UncertaintyInterval {
 public:
  UncertaintyInterval(Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }

  friend bool operator==(const UncertaintyInterval&, const UncertaintyInterval&) = default;

 private:
  Rational lo_;
  Rational hi_;
};

struct QuantileResult {
  std::string document_id;
  GroupKey group;
  std::int64_t times_cited = 0;
  std::size_t n = 0;
  std::size_t below = 0;
  std::size_t tied = 0;
  Rational p_cited_less;
  Rational p_midpoint;
  Rational p_cited_leq;
  UncertaintyInterval interval{0, 100};

  const Rational& percentile(CountingRule rule) const;
};

struct ClassDef {
  std::string label;
  Rational lower;
  Rational upper;
  std::int64_t value = 0;

  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

// Thrown for schemes that do not partition [0,100] or have non-increasing
// values. `line()` is the offending 1-based line in a scheme file, or 0.
class SchemeError : public std::invalid_argument {
 public:
  SchemeError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct SchemeProblem {
  std::size_t class_index;
  std::string message;
};

// Ordered partition of [0,100] into valued classes. Classes are half-open
// [lower, upper) except the last, which is closed at 100.
class ClassScheme {
 public:
  ClassScheme(std::string name, std::vector<ClassDef> classes);

  // First violation of the partition/monotonicity rules, if any.
  static std::optional<SchemeProblem> validate(const std::vector<ClassDef>& classes);

  const std::string& name() const { return name_; }
  const std::vector<ClassDef>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  std::int64_t min_value() const { return classes_.front().value; }
  std::int64_t max_value() const { return classes_.back().value; }

  // Equality ignores the name.
  friend bool operator==(const ClassScheme& a, const ClassScheme& b) {
    return a.classes_ == b.classes_;
  }

 private:
  std::string name_;
  std::vector<ClassDef> classes_;
};

struct ClassAttribution {
  std::vector<Rational> fractions;  // aligned with the scheme's classes
  Rational score;                   // expected class value
  std::size_t rounded_index = 0;    // index into the scheme's classes
  std::int64_t rounded_value = 0;
};

enum class WilcoxonMethod { Exact, NormalApprox };

std::string_view method_name(WilcoxonMethod method);

struct WilcoxonResult {
  std::size_t n_nonzero = 0;
  double w_plus = 0;
  double w_minus = 0;
  std::optional<double> statistic_z;  // NormalApprox only
  double p_two_sided = 1;
  std::optional<Rational> p_exact;    // Exact only
  WilcoxonMethod method = WilcoxonMethod::Exact;
};

}  // namespace pctrank
