#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace hyperpaths {

using Json = nlohmann::ordered_json;

enum class OutputFormat { csv, json };

/// `{config, rows[], summary{}}`. Rows are flat objects sharing one key order.
struct Report {
  Json config = Json::object();
  std::vector<Json> rows;
  Json summary = Json::object();
};

/// Shortest decimal string that parses back to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Compact-per-row JSON with doubles in shortest round-trip form.
std::string to_json_text(const Report& report);
/// Header row from the first row's keys, then one line per row. Summary and
/// config are not part of the CSV body.
std::string to_csv_text(const Report& report);
std::string render(const Report& report, OutputFormat format);

/// Structural check of a JSON report; returns one message per problem.
std::vector<std::string> validate_report_json(const std::string& text);

/// Writes to `path`, or to standard output when path is empty. A relative
/// path is placed under $HYPERPATHS_OUT_DIR when that variable is set.
void write_output(const std::string& text, const std::string& path);
std::string resolve_output_path(const std::string& path);

}  // namespace hyperpaths
