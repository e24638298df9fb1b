#include "hyperpaths/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hyperpaths {
namespace {

void emit_value(std::string& out, const Json& v, int indent, int depth);

void newline(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void emit_scalar(std::string& out, const Json& v) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    // Non-finite values have no JSON literal.
    if (std::isfinite(d)) {
      out += format_double(d);
    } else {
      out += '"' + format_double(d) + '"';
    }
  } else {
    out += v.dump();
  }
}

void emit_value(std::string& out, const Json& v, int indent, int depth) {
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (const auto& [key, val] : v.items()) {
      if (!first) out += ',';
      first = false;
      newline(out, indent, depth + 1);
      out += Json(key).dump();
      out += indent < 0 ? ":" : ": ";
      emit_value(out, val, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += '}';
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += '[';
    bool first = true;
    for (const auto& val : v) {
      if (!first) out += ',';
      first = false;
      newline(out, indent, depth + 1);
      emit_value(out, val, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += ']';
  } else {
    emit_scalar(out, v);
  }
}

std::string csv_field(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_json_text(const Report& report) {
  std::string out = "{\n  \"config\": ";
  emit_value(out, report.config, -1, 0);
  out += ",\n  \"rows\": [";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    emit_value(out, report.rows[i], -1, 0);
  }
  out += report.rows.empty() ? "],\n" : "\n  ],\n";
  out += "  \"summary\": ";
  emit_value(out, report.summary, 2, 1);
  out += "\n}\n";
  return out;
}

std::string to_csv_text(const Report& report) {
  std::string out;
  if (report.rows.empty()) return out;
  std::vector<std::string> keys;
  for (const auto& [key, val] : report.rows.front().items()) keys.push_back(key);
  for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + keys[i];
  out += '\n';
  for (const Json& row : report.rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += ',';
      const auto it = row.find(keys[i]);
      if (it != row.end()) out += csv_field(*it);
    }
    out += '\n';
  }
  return out;
}

std::string render(const Report& report, OutputFormat format) {
  return format == OutputFormat::json ? to_json_text(report) : to_csv_text(report);
}

std::vector<std::string> validate_report_json(const std::string& text) {
  std::vector<std::string> errors;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    errors.push_back(std::string("not valid JSON: ") + e.what());
    return errors;
  }
  if (!doc.is_object()) {
    errors.emplace_back("top level must be an object");
    return errors;
  }
  for (const auto& [key, val] : doc.items()) {
    if (key != "config" && key != "rows" && key != "summary") errors.push_back("unexpected top-level key: " + key);
  }
  if (!doc.contains("config") || !doc["config"].is_object()) errors.emplace_back("config must be an object");
  if (!doc.contains("summary") || !doc["summary"].is_object()) errors.emplace_back("summary must be an object");
  if (!doc.contains("rows") || !doc["rows"].is_array()) {
    errors.emplace_back("rows must be an array");
    return errors;
  }
  std::vector<std::string> keys;
  std::size_t index = 0;
  for (const Json& row : doc["rows"]) {
    const std::string where = "rows[" + std::to_string(index++) + "]";
    if (!row.is_object()) {
      errors.push_back(where + " must be an object");
      continue;
    }
    std::vector<std::string> row_keys;
    for (const auto& [key, val] : row.items()) {
      row_keys.push_back(key);
      if (val.is_object() || val.is_array()) errors.push_back(where + "." + key + " must be a scalar");
    }
    if (keys.empty() && index == 1) {
      keys = row_keys;
    } else if (row_keys != keys) {
      errors.push_back(where + " has a different column set");
    }
  }
  return errors;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("HYPERPATHS_OUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p.string();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path p(resolve_output_path(path));
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + p.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace hyperpaths
