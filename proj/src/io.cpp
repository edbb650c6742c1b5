#include "nhq/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nhq {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // fold -0 into +0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

namespace {

// A cell is emitted as a bare JSON token only if it parses as a finite number.
bool is_finite_number(const std::string& s) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  return end == begin + s.size() && std::isfinite(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_one_table_csv(std::ostream& os, const ResultTable& t) {
  if (!t.name.empty()) os << "# table: " << t.name << "\n";
  for (size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
}

void write_one_table_json(std::ostream& os, const ResultTable& t) {
  os << "{\"columns\":[";
  for (size_t c = 0; c < t.columns.size(); ++c)
    os << (c ? "," : "") << '"' << json_escape(t.columns[c]) << '"';
  os << "],\"rows\":[";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",[" : "[");
    for (size_t c = 0; c < t.rows[r].size(); ++c) {
      const std::string& cell = t.rows[r][c];
      os << (c ? "," : "");
      if (is_finite_number(cell))
        os << cell;
      else
        os << '"' << json_escape(cell) << '"';
    }
    os << "]";
  }
  os << "]}";
}

}  // namespace

void write_csv(std::ostream& os, const Metadata& meta, const std::vector<ResultTable>& tables) {
  for (const auto& [key, value] : meta) os << "# " << key << " = " << value << "\n";
  for (size_t i = 0; i < tables.size(); ++i) {
    if (i) os << "\n";
    write_one_table_csv(os, tables[i]);
  }
}

void write_json(std::ostream& os, const Metadata& meta, const std::vector<ResultTable>& tables) {
  os << "{\"metadata\":{";
  for (size_t i = 0; i < meta.size(); ++i)
    os << (i ? "," : "") << '"' << json_escape(meta[i].first) << "\":\""
       << json_escape(meta[i].second) << '"';
  os << "},\"tables\":{";
  for (size_t i = 0; i < tables.size(); ++i) {
    const std::string name = tables[i].name.empty() ? "results" : tables[i].name;
    os << (i ? "," : "") << '"' << json_escape(name) << "\":";
    write_one_table_json(os, tables[i]);
  }
  os << "}}\n";
}

}  // namespace nhq
