#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace logschro {

// One table cell. Doubles print with 17 significant digits so every value
// round-trips through text exactly.
using ReportValue = std::variant<double, std::int64_t, std::string, bool>;

// Rectangular report: named columns, homogeneous row width. The emitters are
// byte-deterministic, so identical data always serializes identically.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<ReportValue>> rows;

  // Appends one row; throws std::invalid_argument on a width mismatch.
  void add_row(std::initializer_list<ReportValue> values);
};

// Ordered key/value document for run manifests (resolved configuration plus a
// version stamp). Setting an existing key overwrites in place.
struct Manifest {
  std::vector<std::pair<std::string, ReportValue>> fields;

  void set(const std::string& key, ReportValue value);
};

// %.17g rendering used by every emitter.
std::string format_float(double value);

// CSV: header line with the column names, comma separator, "\n" line endings,
// "." decimal point, no trailing whitespace. Cells containing a comma, quote,
// or newline are double-quoted with internal quotes doubled.
std::string to_csv(const ReportTable& table);

// JSON array of objects keyed by the column names; UTF-8, two-space indent,
// no trailing whitespace.
std::string to_json(const ReportTable& table);

// JSON object with the manifest fields in insertion order.
std::string to_json(const Manifest& manifest);

// Writes content through a temporary file in the same directory followed by a
// rename, so a crash never leaves a partial file at `path`. Throws
// std::runtime_error naming the path on any I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace logschro
