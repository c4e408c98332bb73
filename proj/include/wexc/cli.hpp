#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wexc/qseries.hpp"

namespace wexc {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int truncation_order = 10;
  std::uint64_t scan_budget = 10'000'000;
  double numeric_tolerance = 1e-8;
  std::string output_format = "pretty";  // json | tsv | pretty
};
// key=value lines, '#' comments; throws UsageError on unknown keys or bad values
Config parse_config(const std::string& text);

// args exclude the program name; returns the exit code (0 ok, 1 domain error or failed check, 2 usage)
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::ordered_json series_json(const QSeries& s);
// inverse of series_json / QSeries::serialize
QSeries series_from_json(const nlohmann::json& j);

}  // namespace wexc
