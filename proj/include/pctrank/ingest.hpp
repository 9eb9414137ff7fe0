#pragma once

// Reading documents from citation-index exports and grouping them into
// reference sets.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pctrank/model.hpp"

namespace pctrank {

struct Diagnostic {
  std::size_t line = 0;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseReport {
  std::size_t records_read = 0;
  std::size_t documents_emitted = 0;
  std::vector<Diagnostic> warnings;
  std::vector<Diagnostic> errors;

  friend bool operator==(const ParseReport&, const ParseReport&) = default;
};

struct ParseOutput {
  std::vector<Document> documents;
  ParseReport report;
};

// Input that cannot be processed at all (missing CSV column, unreadable file).
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field-tagged export: two-character tags at column 0 followed by a space,
// three-space continuation lines, ER closing each record and EF the file.
// TC, PY, SO, DT and UT fill times_cited, year, source, doc_type and id.
// A record with a malformed line or an unusable TC is skipped and reported
// as an error; a record without TC gets times_cited = 0 and a warning.
ParseOutput parse_wos(std::string_view text);
ParseOutput parse_wos(std::istream& in);

// Serializes documents in the field-tagged format parse_wos reads. Long
// sources are wrapped onto continuation lines.
std::string format_wos(std::span<const Document> documents);

// Comma-separated input with a header row and RFC 4180 quoting.
//
// group_columns entries are either "attribute=column" or a bare column whose
// name is itself an attribute ("source", "year", "doc_type"/"doctype"). When
// empty, header columns named after attributes are picked up automatically.
// Throws IngestError when a named column is absent.
ParseOutput parse_csv(std::string_view text, const std::string& id_column,
                      const std::string& tc_column,
                      const std::vector<std::string>& group_columns = {});
ParseOutput parse_csv(std::istream& in, const std::string& id_column,
                      const std::string& tc_column,
                      const std::vector<std::string>& group_columns = {});

// Partitions documents by their key over `keys`; sets come out ordered by
// key and members keep input order. Empty keys give one global set.
std::vector<ReferenceSet> group_documents(std::span<const Document> documents,
                                          const std::vector<GroupAttribute>& keys);

}  // namespace pctrank
