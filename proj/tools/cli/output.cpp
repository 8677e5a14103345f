#include "output.hpp"

#include <ostream>

namespace jpvi::cli {

Value Value::number(const XReal& x, int digits) {
  Value v;
  if (x.is_nan()) {
    v.kind = Kind::null;
    v.text = "nan";
  } else if (!x.is_finite()) {
    v.kind = Kind::null;
    v.text = x.sign() > 0 ? "inf" : "-inf";
  } else {
    v.kind = Kind::number;
    v.text = x.to_string(digits);
  }
  return v;
}

Value Value::integer(long v) { return Value{Kind::number, std::to_string(v)}; }

Value Value::string(std::string s) { return Value{Kind::string, std::move(s)}; }

Value Value::boolean(bool b) { return Value{Kind::boolean, b ? "true" : "false"}; }

namespace {

void json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          os << "\\u00" << hex[(c >> 4) & 0xf] << hex[c & 0xf];
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

void json_value(std::ostream& os, const Value& v) {
  switch (v.kind) {
    case Value::Kind::number:
    case Value::Kind::boolean: os << v.text; break;
    case Value::Kind::string: json_string(os, v.text); break;
    case Value::Kind::null: os << "null"; break;
  }
}

void json_record(std::ostream& os, const Record& r, const char* indent) {
  os << "{";
  bool first = true;
  for (const auto& [k, v] : r) {
    os << (first ? "\n" : ",\n") << indent << "  ";
    json_string(os, k);
    os << ": ";
    json_value(os, v);
    first = false;
  }
  if (!r.empty()) os << "\n" << indent;
  os << "}";
}

std::string csv_field(const Value& v) {
  if (v.kind != Value::Kind::string) return v.text;
  if (v.text.find_first_of(",\"\n") == std::string::npos) return v.text;
  std::string s = "\"";
  for (char c : v.text) {
    if (c == '"') s += '"';
    s += c;
  }
  return s + "\"";
}

}  // namespace

void write_json(std::ostream& os, const Report& report) {
  os << "{\n  \"params\": ";
  json_record(os, report.params, "  ");
  os << ",\n  \"records\": [";
  for (size_t i = 0; i < report.records.size(); ++i) {
    os << (i == 0 ? "\n    " : ",\n    ");
    json_record(os, report.records[i], "    ");
  }
  if (!report.records.empty()) os << "\n  ";
  os << "],\n  \"worst\": ";
  json_record(os, report.worst, "  ");
  os << "\n}\n";
}

void write_csv(std::ostream& os, const Report& report) {
  if (report.records.empty()) return;
  const Record& head = report.records.front();
  for (size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << head[i].first;
  os << "\n";
  for (const auto& r : report.records) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i].second);
    os << "\n";
  }
}

}  // namespace jpvi::cli
