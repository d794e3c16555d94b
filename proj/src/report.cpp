#include "logschro/report.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace logschro {
namespace {

std::string csv_escape(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& raw) {
  std::string out = "\"";
  for (unsigned char c : raw) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += char(c);
        }
    }
  }
  out += '"';
  return out;
}

std::string render_cell(const ReportValue& value, bool json) {
  if (const double* d = std::get_if<double>(&value)) return format_float(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*i);
  }
  if (const bool* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(value);
  return json ? json_escape(s) : csv_escape(s);
}

}  // namespace

void ReportTable::add_row(std::initializer_list<ReportValue> values) {
  if (values.size() != columns.size()) {
    throw std::invalid_argument("report row has " + std::to_string(values.size()) +
                                " cells; table has " + std::to_string(columns.size()) +
                                " columns");
  }
  rows.emplace_back(values);
}

void Manifest::set(const std::string& key, ReportValue value) {
  for (auto& field : fields) {
    if (field.first == key) {
      field.second = std::move(value);
      return;
    }
  }
  fields.emplace_back(key, std::move(value));
}

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const ReportTable& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += csv_escape(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += render_cell(row[c], false);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ReportTable& table) {
  std::string out = "[";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out += r == 0 ? "\n" : ",\n";
    out += "  {";
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out += ", ";
      out += json_escape(table.columns[c]);
      out += ": ";
      out += render_cell(table.rows[r][c], true);
    }
    out += '}';
  }
  if (!table.rows.empty()) out += '\n';
  out += "]\n";
  return out;
}

std::string to_json(const Manifest& manifest) {
  std::string out = "{";
  for (size_t i = 0; i < manifest.fields.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += "  ";
    out += json_escape(manifest.fields[i].first);
    out += ": ";
    out += render_cell(manifest.fields[i].second, true);
  }
  if (!manifest.fields.empty()) out += '\n';
  out += "}\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("cannot open " + tmp + " for writing: " +
                             std::strerror(errno));
  }
  const size_t written = std::fwrite(content.data(), 1, content.size(), f);
  const bool flushed = std::fflush(f) == 0;
  const bool closed = std::fclose(f) == 0;
  if (written != content.size() || !flushed || !closed) {
    std::remove(tmp.c_str());
    throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move " + tmp + " to " + path + ": " +
                             std::strerror(errno));
  }
}

}  // namespace logschro
