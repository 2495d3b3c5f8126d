#pragma once

// Flat records and their CSV / JSON encodings.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace dirac1d::io {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

using Value = std::variant<std::monostate, double, long long, bool, std::string>;

struct Field {
  std::string name;
  Value value;
};
using Record = std::vector<Field>;

/// Header row from `columns`, one row per record, LF endings. Null values are
/// empty fields; text is quoted when it contains a comma, quote or newline.
std::string to_csv(const std::vector<std::string>& columns, const std::vector<Record>& records);

/// Array of flat objects; null values become JSON null.
std::string to_json(const std::vector<Record>& records);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoFailure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dirac1d::io
