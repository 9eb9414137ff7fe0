#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pctrank/ingest.hpp"

using namespace pctrank;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(PCTRANK_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* kTwoRecords =
    "FN Clarivate Analytics Web of Science\n"
    "VR 1.0\n"
    "PT J\n"
    "SO J INFORMETR\n"
    "DT Article\n"
    "PY 2010\n"
    "TC 14\n"
    "UT WOS:1\n"
    "ER\n"
    "\n"
    "PT J\n"
    "SO J INFORMETR\n"
    "DT Article\n"
    "PY 2010\n"
    "TC 0\n"
    "UT WOS:2\n"
    "ER\n"
    "EF\n";

}  // namespace

TEST_CASE("field-tagged records") {
  ParseOutput out = parse_wos(std::string_view(kTwoRecords));
  REQUIRE(out.documents.size() == 2);
  CHECK(out.documents[0].times_cited() == 14);
  CHECK(out.documents[1].times_cited() == 0);
  CHECK(out.documents[0].id() == "WOS:1");
  CHECK(*out.documents[0].source() == "J INFORMETR");
  CHECK(*out.documents[0].year() == 2010);
  CHECK(*out.documents[0].doc_type() == "Article");
  CHECK(out.report.records_read == 2);
  CHECK(out.report.documents_emitted == 2);
  CHECK(out.report.warnings.empty());
  CHECK(out.report.errors.empty());
}

TEST_CASE("missing TC counts as zero with a warning") {
  ParseOutput out = parse_wos(std::string_view("PT J\nSO X\nPY 2001\nUT WOS:9\nER\nEF\n"));
  REQUIRE(out.documents.size() == 1);
  CHECK(out.documents[0].times_cited() == 0);
  REQUIRE(out.report.warnings.size() == 1);
  CHECK(out.report.warnings[0].line == 1);
  CHECK(out.report.errors.empty());
}

TEST_CASE("non-numeric TC skips the record") {
  ParseOutput out =
      parse_wos(std::string_view("PT J\nTC fourteen\nUT WOS:1\nER\nPT J\nTC 2\nUT WOS:2\nER\n"));
  REQUIRE(out.documents.size() == 1);
  CHECK(out.documents[0].id() == "WOS:2");
  REQUIRE(out.report.errors.size() == 1);
  CHECK(out.report.errors[0].line == 2);
  CHECK(out.report.errors[0].message.find("fourteen") != std::string::npos);
  CHECK(out.report.records_read == 2);
  CHECK(out.report.documents_emitted == 1);

  ParseOutput negative = parse_wos(std::string_view("PT J\nTC -4\nER\n"));
  CHECK(negative.documents.empty());
  CHECK(negative.report.errors.size() == 1);
}

TEST_CASE("malformed lines inside a record skip it; outside they warn") {
  ParseOutput out = parse_wos(std::string_view(
      "stray text\n"
      "PT J\nTC14\nUT WOS:1\nER\n"
      "PT J\ntc 3\nUT WOS:2\nER\n"
      "PT J\nTC 3\nUT WOS:3\nER\n"
      "  two-space line\n"
      "ER\n"));
  REQUIRE(out.documents.size() == 1);
  CHECK(out.documents[0].id() == "WOS:3");
  CHECK(out.report.errors.size() == 2);
  CHECK(out.report.errors[0].line == 3);
  CHECK(out.report.errors[1].line == 7);
  CHECK(out.report.warnings.size() == 3);
  CHECK(out.report.warnings[0].line == 1);
}

TEST_CASE("continuation lines, CRLF and byte-order mark") {
  ParseOutput out = parse_wos(std::string_view(
      "\xEF\xBB\xBF" "FN Clarivate\r\n"
      "PT J\r\n"
      "SO JOURNAL OF THE AMERICAN SOCIETY\r\n"
      "   FOR INFORMATION SCIENCE\r\n"
      "DT Review\r\n"
      "TC 7\r\n"
      "ER\r\n"));
  REQUIRE(out.documents.size() == 1);
  CHECK(*out.documents[0].source() == "JOURNAL OF THE AMERICAN SOCIETY FOR INFORMATION SCIENCE");
  CHECK(*out.documents[0].doc_type() == "Review");
  CHECK(out.report.warnings.empty());
}

TEST_CASE("ids: fallback and duplicates") {
  ParseOutput out = parse_wos(std::string_view(
      "PT J\nSO J X\nPY 2010\nTC 1\nER\n"
      "PT J\nTC 2\nER\n"
      "PT J\nTC 3\nUT WOS:7\nER\n"
      "PT J\nTC 4\nUT WOS:7\nER\n"
      "PT J\nTC 5\nUT WOS:7\nER\n"));
  REQUIRE(out.documents.size() == 5);
  CHECK(out.documents[0].id() == "J X:2010:1");
  CHECK(out.documents[1].id() == "(unknown):(unknown):2");
  CHECK(out.documents[2].id() == "WOS:7");
  CHECK(out.documents[3].id() == "WOS:7#2");
  CHECK(out.documents[4].id() == "WOS:7#3");
  CHECK(out.report.warnings.size() == 2);
}

TEST_CASE("unterminated final record is kept with a warning") {
  ParseOutput out = parse_wos(std::string_view("PT J\nTC 3\nUT WOS:1\n"));
  CHECK(out.documents.size() == 1);
  CHECK(out.report.warnings.size() == 1);
  CHECK(parse_wos(std::string_view("")).documents.empty());
}

TEST_CASE("five-record fixture") {
  const std::string text = fixture("five_records.wos");
  ParseOutput first = parse_wos(std::string_view(text));
  CHECK(first.documents.size() == 5);
  CHECK(first.report.warnings.size() == 1);
  CHECK(first.report.errors.empty());
  CHECK(first.documents[1].source() == "JOURNAL OF THE AMERICAN SOCIETY FOR INFORMATION SCIENCE AND TECHNOLOGY");
  CHECK(first.documents[2].times_cited() == 0);

  std::istringstream stream(text);
  ParseOutput second = parse_wos(stream);
  CHECK(second.documents == first.documents);
  CHECK(second.report == first.report);
}

TEST_CASE("field-tagged serialization round-trips") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> sources = {
      "SCIENTOMETRICS", "J INFORMETR",
      "JOURNAL OF THE AMERICAN SOCIETY FOR INFORMATION SCIENCE AND TECHNOLOGY",
      "RESEARCH EVALUATION"};
  const std::vector<std::string> types = {"Article", "Review", "Editorial Material", "Letter"};
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::uniform_int_distribution<int> year(1995, 2012);
  std::geometric_distribution<std::int64_t> cites(0.1);
  std::bernoulli_distribution missing(0.15);

  std::vector<Document> docs;
  for (int i = 0; i < 200; ++i) {
    docs.emplace_back("WOS:" + std::to_string(100000 + i), cites(rng),
                      missing(rng) ? std::nullopt : std::optional(sources[pick(rng)]),
                      missing(rng) ? std::nullopt : std::optional(year(rng)),
                      missing(rng) ? std::nullopt : std::optional(types[pick(rng)]));
  }
  ParseOutput back = parse_wos(std::string_view(format_wos(docs)));
  CHECK(back.report.errors.empty());
  CHECK(back.report.warnings.empty());
  CHECK(back.documents == docs);
}

TEST_CASE("CSV rows") {
  ParseOutput out = parse_csv(std::string_view("id,tc\na,3\nb,0\n"), "id", "tc");
  REQUIRE(out.documents.size() == 2);
  CHECK(out.documents[0].times_cited() == 3);
  CHECK(out.documents[1].id() == "b");

  ParseOutput bad = parse_csv(std::string_view("id,tc\na,3\nc,-1\nd,x\n"), "id", "tc");
  CHECK(bad.documents.size() == 1);
  REQUIRE(bad.report.errors.size() == 2);
  CHECK(bad.report.errors[0].line == 3);
  CHECK(bad.report.records_read == 3);

  CHECK_THROWS_AS(parse_csv(std::string_view("key,tc\na,1\n"), "id", "tc"), IngestError);
  CHECK_THROWS_AS(parse_csv(std::string_view(""), "id", "tc"), IngestError);
  CHECK_THROWS_AS(parse_csv(std::string_view("id,tc\n"), "id", "tc", {"journal"}), IngestError);
}

TEST_CASE("CSV quoting and grouping columns") {
  const char* text =
      "id,tc,Journal,PY,type\n"
      "a,3,\"Journal, of X\",2010,Review\n"
      "b,1,\"Say \"\"hi\"\"\",2011,article\n"
      "\"c\",2,\"multi\nline\",,REVIEW\n"
      "d,5,Plain,20x0,Review\n";
  ParseOutput out = parse_csv(std::string_view(text), "id", "tc",
                              {"source=Journal", "year=PY", "doctype=type"});
  REQUIRE(out.documents.size() == 4);
  CHECK(*out.documents[0].source() == "Journal, of X");
  CHECK(*out.documents[0].year() == 2010);
  CHECK(*out.documents[1].source() == "Say \"hi\"");
  CHECK(*out.documents[2].source() == "multi\nline");
  CHECK_FALSE(out.documents[2].year().has_value());
  CHECK(*out.documents[2].doc_type() == "REVIEW");
  CHECK_FALSE(out.documents[3].year().has_value());
  REQUIRE(out.report.warnings.size() == 1);
  CHECK(out.report.warnings[0].line == 6);

  ParseOutput automatic =
      parse_csv(std::string_view("id,tc,source,year,doctype\na,1,S,2010,Review\n"), "id", "tc");
  REQUIRE(automatic.documents.size() == 1);
  CHECK(*automatic.documents[0].source() == "S");
  CHECK(*automatic.documents[0].year() == 2010);
  CHECK(*automatic.documents[0].doc_type() == "Review");
}

TEST_CASE("grouping partitions documents") {
  std::vector<Document> docs;
  for (int i = 0; i < 10; ++i) docs.emplace_back("r" + std::to_string(i), i, "SCIENTOMETRICS", 2011, "Review");
  auto one = group_documents(docs, {GroupAttribute::Source, GroupAttribute::Year, GroupAttribute::DocType});
  REQUIRE(one.size() == 1);
  CHECK(one[0].n() == 10);

  docs.emplace_back("x", 4, "J INFORMETR", 2010, "REVIEW");
  docs.emplace_back("y", 4);
  auto global = group_documents(docs, {});
  REQUIRE(global.size() == 1);
  CHECK(global[0].n() == docs.size());
  CHECK(global[0].members() == docs);

  auto by_type = group_documents(docs, {GroupAttribute::DocType});
  REQUIRE(by_type.size() == 2);
  CHECK(by_type[0].key().to_string() == "doc_type=(unknown)");
  CHECK(by_type[1].n() == 11);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> year(2010, 2011);
  std::bernoulli_distribution missing(0.1);
  std::vector<Document> mixed;
  std::size_t in_2010 = 0;
  for (int i = 0; i < 300; ++i) {
    std::optional<int> y;
    if (!missing(rng)) y = year(rng);
    if (y == 2010) ++in_2010;
    mixed.emplace_back("m" + std::to_string(i), i % 7, std::nullopt, y);
  }
  auto by_year = group_documents(mixed, {GroupAttribute::Year});
  REQUIRE(by_year.size() == 3);
  CHECK(by_year[1].key().to_string() == "year=2010");
  CHECK(by_year[1].n() == in_2010);
  std::size_t total = 0;
  for (const auto& set : by_year) total += set.n();
  CHECK(total == mixed.size());
}
