// pctrank: convert times-cited values into percentile ranks in batch.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pctrank/pipeline.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pctrank;

  CLI::App app{"Convert times-cited values into percentile ranks within reference sets"};
  RunConfig config;
  std::string input;
  std::string format = "wos";
  std::string rule = "mid";
  std::string group_by = "source,year,doctype";
  std::string csv_group;
  std::string out_path;
  std::string summary_path;
  bool fractional = true;

  app.add_option("--input", input, "Input file")->required();
  app.add_option("--format", format, "Input format")
      ->check(CLI::IsMember({"wos", "csv"}))
      ->capture_default_str();
  app.add_option("--rule", rule, "Counting rule: lb, rousseau or mid")
      ->check(CLI::IsMember({"lb", "rousseau", "mid"}))
      ->capture_default_str();
  app.add_option("--scheme", config.scheme, "pr6, quartiles or a scheme file")->capture_default_str();
  app.add_option("--group-by", group_by,
                 "Comma-separated grouping attributes (source,year,doctype); empty for one set")
      ->capture_default_str();
  app.add_flag("--fractional,!--no-fractional", fractional,
               "Class from the rounded fractional score (default) or from the percentile itself");
  app.add_option("--out", out_path, "Results CSV (default: standard output)");
  app.add_option("--summary", summary_path, "Summary report");
  app.add_option("--csv-id", config.csv_id, "CSV id column")->capture_default_str();
  app.add_option("--csv-tc", config.csv_tc, "CSV times-cited column")->capture_default_str();
  app.add_option("--csv-group", csv_group,
                 "CSV grouping columns, as attribute=column or attribute names");
  app.add_option("--precision", config.score_digits, "Decimals for class scores")
      ->check(CLI::Range(0, 18))
      ->capture_default_str();
  app.add_option("--jobs", config.jobs, "Worker threads (0 = one per core)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  config.input = input;
  config.format = format == "csv" ? InputFormat::Csv : InputFormat::Wos;
  config.rule = *parse_counting_rule(rule);
  config.fractional = fractional;
  config.group_by.clear();
  for (const std::string& name : split_list(group_by)) {
    auto attribute = parse_group_attribute(name);
    if (!attribute) {
      std::cerr << "error: unknown grouping attribute '" << name << "'\n";
      return kExitConfigError;
    }
    config.group_by.push_back(*attribute);
  }
  config.csv_group = split_list(csv_group);
  if (!out_path.empty()) config.results_path = out_path;
  if (!summary_path.empty()) config.summary_path = summary_path;

  try {
    return run_pipeline(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
