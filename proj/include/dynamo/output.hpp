#pragma once
// Plain-text outputs.  Numbers are written with 12 significant digits
// (printf "%.12g") in CSV and rounded the same way in JSON, so identical
// runs produce identical bytes.

#include <dynamo/error.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynamo {

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

/// One cell of a CSV row: a number or a verbatim token.
class CsvField {
 public:
  CsvField(double x) : text_(format_number(x)) {}           // NOLINT(google-explicit-constructor)
  CsvField(int x) : text_(std::to_string(x)) {}             // NOLINT(google-explicit-constructor)
  CsvField(long x) : text_(std::to_string(x)) {}            // NOLINT(google-explicit-constructor)
  CsvField(std::size_t x) : text_(std::to_string(x)) {}     // NOLINT(google-explicit-constructor)
  CsvField(bool x) : text_(x ? "1" : "0") {}                // NOLINT(google-explicit-constructor)
  CsvField(const char* s) : text_(s) {}                     // NOLINT(google-explicit-constructor)
  CsvField(std::string s) : text_(std::move(s)) {}          // NOLINT(google-explicit-constructor)
  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// Rows held in memory and written as CSV or as JSON
/// {"columns": [...], "rows": [[...], ...]}.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::initializer_list<CsvField> fields) {
    if (fields.size() != columns_.size()) throw std::logic_error("table row width mismatch");
    rows_.emplace_back(fields);
  }

  [[nodiscard]] std::size_t size() const { return rows_.size(); }

  /// Writes `<stem>.csv` or `<stem>.json`; returns the path written.
  std::filesystem::path write(const std::filesystem::path& stem, const std::string& format) const {
    auto path = stem;
    path += format == "json" ? ".json" : ".csv";
    if (format == "json") {
      nlohmann::json doc;
      doc["columns"] = columns_;
      doc["rows"] = nlohmann::json::array();
      for (const auto& row : rows_) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& f : row) r.push_back(as_json(f.text()));
        doc["rows"].push_back(std::move(r));
      }
      std::ofstream out(path);
      if (!out) throw ValidationError("output: cannot write '" + path.string() + "'");
      out << doc.dump(2) << '\n';
      return path;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("output: cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].text();
      out << '\n';
    }
    return path;
  }

 private:
  // Numbers stay numbers (already rounded by their text); the rest are strings.
  static nlohmann::json as_json(const std::string& text) {
    if (text.empty()) return nullptr;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end && *end == '\0' && std::isfinite(v)) {
      if (text.find_first_of(".eE") == std::string::npos) return std::stoll(text);
      return v;
    }
    return text;
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<CsvField>> rows_;
};

/// Copies `doc` with every floating-point value rounded to 12 digits.
inline nlohmann::json rounded(const nlohmann::json& doc) {
  if (doc.is_number_float()) return round12(doc.get<double>());
  if (doc.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : doc) out.push_back(rounded(e));
    return out;
  }
  if (doc.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return doc;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("output: cannot write '" + path.string() + "'");
  out << rounded(doc).dump(2) << '\n';
}

}  // namespace dynamo
