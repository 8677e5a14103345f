#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jpvi/xreal.hpp"

namespace jpvi::cli {

/// A rendered value: numbers keep their decimal text, non-finite numbers
/// render as null (JSON) or nan/inf (CSV).
struct Value {
  enum class Kind { number, string, boolean, null };
  Kind kind = Kind::null;
  std::string text;

  static Value number(const XReal& x, int digits);
  static Value integer(long v);
  static Value string(std::string s);
  static Value boolean(bool b);
};

/// Ordered key/value pairs; order is the output order.
using Record = std::vector<std::pair<std::string, Value>>;

struct Report {
  Record params;
  std::vector<Record> records;
  Record worst;
};

void write_json(std::ostream& os, const Report& report);
/// Header row from the first record's keys, then one row per record.
void write_csv(std::ostream& os, const Report& report);

}  // namespace jpvi::cli
