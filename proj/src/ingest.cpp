#include "pctrank/ingest.hpp"

#include <charconv>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace pctrank {
namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

std::string_view trim(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string_view strip_bom(std::string_view text) {
  if (text.substr(0, kBom.size()) == kBom) text.remove_prefix(kBom.size());
  return text;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::string> nonempty(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  return std::string(text);
}

// Makes ids unique within a batch: the k-th repeat of "X" becomes "X#k".
class IdRegistry {
 public:
  std::string claim(const std::string& id, std::size_t line, ParseReport& report) {
    if (taken_.insert(id).second) return id;
    std::size_t& k = next_suffix_.try_emplace(id, 2).first->second;
    std::string unique = id + "#" + std::to_string(k);
    while (!taken_.insert(unique).second) unique = id + "#" + std::to_string(++k);
    ++k;
    report.warnings.push_back({line, "duplicate id '" + id + "' renamed to '" + unique + "'"});
    return unique;
  }

 private:
  std::unordered_set<std::string> taken_;
  std::unordered_map<std::string, std::size_t> next_suffix_;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_tag_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

// ---------------------------------------------------------------------------
// Field-tagged records

struct Field {
  std::string value;
  std::size_t line = 0;
};

class WosReader {
 public:
  ParseOutput run(std::string_view text) {
    auto lines = split_lines(strip_bom(text));
    for (std::size_t i = 0; i < lines.size() && !finished_; ++i) handle(lines[i], i + 1);
    if (in_record_) {
      out_.report.warnings.push_back({record_start_, "record not terminated by ER"});
      finish_record();
    }
    out_.report.documents_emitted = out_.documents.size();
    return std::move(out_);
  }

 private:
  void handle(std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) return;

    if (line.starts_with("   ")) {
      std::string_view content = trim(line.substr(3));
      if (in_record_ && failed_) return;
      if (in_record_ && current_ != nullptr) {
        if (!current_->value.empty()) current_->value += ' ';
        current_->value += content;
      } else if (!in_record_ && in_header_field_) {
        // continuation of FN/VR
      } else {
        warn(line_no, "continuation line outside a field");
      }
      return;
    }

    const bool tagged = line.size() >= 2 && is_tag_char(line[0]) && is_tag_char(line[1]);
    const std::string_view tag = tagged ? line.substr(0, 2) : std::string_view{};
    const bool bare_terminator = line.size() == 2 && (tag == "ER" || tag == "EF");
    if (!tagged || !(bare_terminator || line[2] == ' ')) {
      if (in_record_) {
        fail(line_no, "malformed tag line '" + std::string(line) + "'");
      } else {
        warn(line_no, "unexpected line outside a record");
      }
      return;
    }
    std::string_view value = line.size() > 3 ? trim(line.substr(3)) : std::string_view{};

    if (tag == "EF") {
      if (in_record_) {
        warn(record_start_, "record not terminated by ER");
        finish_record();
      }
      finished_ = true;
      return;
    }
    if (tag == "ER") {
      if (in_record_) {
        finish_record();
      } else {
        warn(line_no, "ER without an open record");
      }
      return;
    }
    if (!in_record_ && (tag == "FN" || tag == "VR")) {
      in_header_field_ = true;
      return;
    }
    if (!in_record_) {
      in_record_ = true;
      record_start_ = line_no;
      fields_.clear();
      failed_ = false;
    }
    auto [it, inserted] = fields_.try_emplace(std::string(tag), Field{std::string(value), line_no});
    if (inserted) {
      current_ = &it->second;
    } else {
      warn(line_no, "repeated tag " + std::string(tag) + " ignored");
      current_ = nullptr;
    }
  }

  void finish_record() {
    ++out_.report.records_read;
    const std::size_t sequence = out_.report.records_read;
    in_record_ = false;
    in_header_field_ = false;
    current_ = nullptr;
    if (failed_) return;

    std::int64_t times_cited = 0;
    if (auto tc = fields_.find("TC"); tc == fields_.end()) {
      warn(record_start_, "record has no TC field; times cited set to 0");
    } else {
      auto parsed = parse_int<std::int64_t>(tc->second.value);
      if (!parsed || *parsed < 0) {
        error(tc->second.line,
              "TC value '" + tc->second.value + "' is not a non-negative integer; record skipped");
        return;
      }
      times_cited = *parsed;
    }

    std::optional<int> year;
    if (auto py = fields_.find("PY"); py != fields_.end()) {
      year = parse_int<int>(py->second.value);
      if (!year) warn(py->second.line, "PY value '" + py->second.value + "' is not a year; ignored");
    }
    std::optional<std::string> source;
    if (auto so = fields_.find("SO"); so != fields_.end()) source = nonempty(so->second.value);
    std::optional<std::string> doc_type;
    if (auto dt = fields_.find("DT"); dt != fields_.end()) doc_type = nonempty(dt->second.value);

    std::string id;
    std::size_t id_line = record_start_;
    if (auto ut = fields_.find("UT"); ut != fields_.end() && !trim(ut->second.value).empty()) {
      id = std::string(trim(ut->second.value));
      id_line = ut->second.line;
    } else {
      id = source.value_or(std::string(kUnknownValue)) + ":" +
           (year ? std::to_string(*year) : std::string(kUnknownValue)) + ":" +
           std::to_string(sequence);
    }
    id = ids_.claim(id, id_line, out_.report);
    out_.documents.emplace_back(std::move(id), times_cited, std::move(source), year,
                                std::move(doc_type));
  }

  void warn(std::size_t line, std::string message) {
    out_.report.warnings.push_back({line, std::move(message)});
  }
  void error(std::size_t line, std::string message) {
    out_.report.errors.push_back({line, std::move(message)});
  }
  void fail(std::size_t line, std::string message) {
    if (!failed_) error(line, message + "; record skipped");
    failed_ = true;
    current_ = nullptr;
  }

  ParseOutput out_;
  IdRegistry ids_;
  std::map<std::string, Field> fields_;
  Field* current_ = nullptr;
  std::size_t record_start_ = 0;
  bool in_record_ = false;
  bool in_header_field_ = false;
  bool failed_ = false;
  bool finished_ = false;
};

// ---------------------------------------------------------------------------
// CSV

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180: quoted fields may hold commas, doubled quotes and newlines.
std::vector<CsvRow> read_csv_rows(std::string_view text, ParseReport& report) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1;
  row.line = 1;
  bool quoted = false;
  bool field_was_quoted = false;
  bool row_has_content = false;

  auto end_field = [&]() {
    row.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&]() {
    end_field();
    if (row_has_content) rows.push_back(std::move(row));
    row = CsvRow{};
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          quoted = true;
          field_was_quoted = true;
        } else {
          field += c;
        }
        row_has_content = true;
        break;
      case ',':
        end_field();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row.line = line;
        break;
      default:
        field += c;
        row_has_content = true;
    }
  }
  if (quoted) report.warnings.push_back({row.line, "unterminated quoted field"});
  end_row();
  return rows;
}

struct CsvBinding {
  GroupAttribute attribute;
  std::size_t column;
};

}  // namespace

ParseOutput parse_wos(std::string_view text) { return WosReader().run(text); }

ParseOutput parse_wos(std::istream& in) {
  std::string text = read_all(in);
  return parse_wos(std::string_view(text));
}

std::string format_wos(std::span<const Document> documents) {
  constexpr std::size_t kWrap = 40;
  std::string out = "FN Clarivate Analytics Web of Science\nVR 1.0\n";
  for (const Document& doc : documents) {
    out += "PT J\n";
    if (doc.doc_type()) out += "DT " + *doc.doc_type() + "\n";
    if (doc.source()) {
      std::string_view rest = *doc.source();
      std::string_view prefix = "SO ";
      while (rest.size() > kWrap) {
        std::size_t cut = rest.rfind(' ', kWrap);
        if (cut == std::string_view::npos || cut == 0) break;
        out += std::string(prefix) + std::string(rest.substr(0, cut)) + "\n";
        rest.remove_prefix(cut + 1);
        prefix = "   ";
      }
      out += std::string(prefix) + std::string(rest) + "\n";
    }
    if (doc.year()) out += "PY " + std::to_string(*doc.year()) + "\n";
    out += "TC " + std::to_string(doc.times_cited()) + "\n";
    out += "UT " + doc.id() + "\n";
    out += "ER\n\n";
  }
  out += "EF\n";
  return out;
}

ParseOutput parse_csv(std::string_view text, const std::string& id_column,
                      const std::string& tc_column, const std::vector<std::string>& group_columns) {
  ParseOutput out;
  auto rows = read_csv_rows(strip_bom(text), out.report);
  if (rows.empty()) throw IngestError("CSV input has no header row");

  const CsvRow& header = rows.front();
  auto find_column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (trim(header.fields[i]) == trim(name)) return i;
    }
    return std::nullopt;
  };
  auto require_column = [&](std::string_view name) {
    auto column = find_column(name);
    if (!column) throw IngestError("CSV header has no column '" + std::string(name) + "'");
    return *column;
  };

  const std::size_t id_at = require_column(id_column);
  const std::size_t tc_at = require_column(tc_column);
  std::vector<CsvBinding> bindings;
  if (group_columns.empty()) {
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (auto attribute = parse_group_attribute(header.fields[i])) {
        bool bound = false;
        for (const auto& b : bindings) bound = bound || b.attribute == *attribute;
        if (!bound) bindings.push_back({*attribute, i});
      }
    }
  } else {
    for (const std::string& spec : group_columns) {
      std::string_view attribute_text = spec;
      std::string_view column_text = spec;
      if (auto eq = spec.find('='); eq != std::string::npos) {
        attribute_text = std::string_view(spec).substr(0, eq);
        column_text = std::string_view(spec).substr(eq + 1);
      }
      auto attribute = parse_group_attribute(attribute_text);
      if (!attribute) {
        throw IngestError("'" + std::string(attribute_text) +
                          "' is not a grouping attribute (source, year, doc_type)");
      }
      bindings.push_back({*attribute, require_column(column_text)});
    }
  }

  IdRegistry ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    ++out.report.records_read;
    if (row.fields.size() != header.fields.size()) {
      out.report.errors.push_back({row.line, "expected " + std::to_string(header.fields.size()) +
                                                 " fields, found " +
                                                 std::to_string(row.fields.size()) +
                                                 "; row skipped"});
      continue;
    }
    std::string id(trim(row.fields[id_at]));
    if (id.empty()) {
      out.report.errors.push_back({row.line, "empty id; row skipped"});
      continue;
    }
    auto tc = parse_int<std::int64_t>(row.fields[tc_at]);
    if (!tc || *tc < 0) {
      out.report.errors.push_back({row.line, "times cited '" + row.fields[tc_at] +
                                                 "' is not a non-negative integer; row skipped"});
      continue;
    }
    std::optional<std::string> source;
    std::optional<int> year;
    std::optional<std::string> doc_type;
    for (const CsvBinding& b : bindings) {
      const std::string& raw = row.fields[b.column];
      switch (b.attribute) {
        case GroupAttribute::Source:
          source = nonempty(raw);
          break;
        case GroupAttribute::DocType:
          doc_type = nonempty(raw);
          break;
        case GroupAttribute::Year:
          if (!trim(raw).empty()) {
            year = parse_int<int>(raw);
            if (!year) {
              out.report.warnings.push_back({row.line, "year '" + raw + "' is not a year; ignored"});
            }
          }
          break;
      }
    }
    id = ids.claim(id, row.line, out.report);
    out.documents.emplace_back(std::move(id), *tc, std::move(source), year, std::move(doc_type));
  }
  out.report.documents_emitted = out.documents.size();
  return out;
}

ParseOutput parse_csv(std::istream& in, const std::string& id_column, const std::string& tc_column,
                      const std::vector<std::string>& group_columns) {
  std::string text = read_all(in);
  return parse_csv(std::string_view(text), id_column, tc_column, group_columns);
}

std::vector<ReferenceSet> group_documents(std::span<const Document> documents,
                                          const std::vector<GroupAttribute>& keys) {
  std::map<GroupKey, std::vector<Document>> groups;
  for (const Document& doc : documents) groups[GroupKey::of(doc, keys)].push_back(doc);
  std::vector<ReferenceSet> sets;
  sets.reserve(groups.size());
  for (auto& [key, members] : groups) sets.emplace_back(key, std::move(members));
  return sets;
}

}  // namespace pctrank
