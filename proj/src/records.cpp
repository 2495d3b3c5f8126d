#include "dirac1d/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "dirac1d/error.hpp"

namespace dirac1d::io {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double d) const { return std::isfinite(d) ? format_number(d) : ""; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + '"';
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

std::string to_csv(const std::vector<std::string>& columns, const std::vector<Record>& records) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      for (const auto& f : rec) {
        if (f.name == columns[i]) {
          out += csv_cell(f.value);
          break;
        }
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<Record>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rec : records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& f : rec) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              obj[f.name] = nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) {
                obj[f.name] = v == 0.0 ? 0.0 : v;
              } else {
                obj[f.name] = nullptr;
              }
            } else {
              obj[f.name] = v;
            }
          },
          f.value);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(1) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::IoFailure, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::IoFailure, "cannot move output into " + path.string() + ": " + ec.message());
  }
}

}  // namespace dirac1d::io
