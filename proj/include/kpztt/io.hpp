#pragma once
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <unistd.h>

namespace kpztt {

using Cell = std::variant<double, std::string>;

struct Column {
  std::string name;
  bool text = false;
};

struct ResultTable {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json meta = nlohmann::json::object();

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the column count");
    rows.push_back(std::move(row));
  }
  bool operator==(const ResultTable& o) const;
};

namespace detail {

inline bool same_cell(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    return (std::isnan(*x) && std::isnan(y)) || std::memcmp(x, &y, sizeof y) == 0;
  }
  return std::get<std::string>(a) == std::get<std::string>(b);
}

inline std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

inline std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace detail

inline bool ResultTable::operator==(const ResultTable& o) const {
  if (columns.size() != o.columns.size() || rows.size() != o.rows.size()) return false;
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j].name != o.columns[j].name || columns[j].text != o.columns[j].text) return false;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (!detail::same_cell(rows[i][j], o.rows[i][j])) return false;
  return true;
}

// RFC 4180, CRLF line breaks. Text cells and the header are always quoted; reals use 17 significant digits.
inline std::string to_csv(const ResultTable& t) {
  std::string s;
  for (std::size_t j = 0; j < t.columns.size(); ++j) s += (j ? "," : "") + detail::quote(t.columns[j].name);
  s += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) s += ',';
      if (const double* v = std::get_if<double>(&row[j])) s += detail::fmt_real(*v);
      else s += detail::quote(std::get<std::string>(row[j]));
    }
    s += "\r\n";
  }
  return s;
}

// Quoted fields are text, bare fields are reals.
inline ResultTable from_csv(const std::string& s) {
  std::vector<std::vector<std::pair<std::string, bool>>> recs(1);
  std::string field;
  bool quoted = false, in_quotes = false, any = false;
  auto end_field = [&] {
    recs.back().push_back({field, quoted});
    field.clear();
    quoted = false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      in_quotes = quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      end_field();
      recs.emplace_back();
      any = false;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw std::runtime_error("csv: unterminated quote");
  if (any || !field.empty()) end_field();
  if (recs.back().empty()) recs.pop_back();
  if (recs.empty()) throw std::runtime_error("csv: missing header");

  ResultTable t;
  for (const auto& [name, q] : recs[0]) t.columns.push_back({name, false});
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].size() != t.columns.size()) throw std::runtime_error("csv: ragged row " + std::to_string(i));
    std::vector<Cell> row;
    for (std::size_t j = 0; j < recs[i].size(); ++j) {
      const auto& [f, q] = recs[i][j];
      if (q) {
        row.emplace_back(f);
        t.columns[j].text = true;
      } else {
        row.emplace_back(detail::parse_real(f));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline constexpr const char* kSchemaVersion = "1";

inline nlohmann::json to_json(const ResultTable& t) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["meta"] = t.meta;
  j["columns"] = nlohmann::json::array();
  for (const auto& c : t.columns) j["columns"].push_back({{"name", c.name}, {"type", c.text ? "text" : "real"}});
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) {
      if (const double* v = std::get_if<double>(&c)) {
        if (std::isfinite(*v)) r.push_back(*v);
        else r.push_back(detail::fmt_real(*v));  // non-finite reals travel as strings in real columns
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline ResultTable from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != std::string(kSchemaVersion)) throw std::runtime_error("json: unsupported schema");
  ResultTable t;
  t.meta = j.value("meta", nlohmann::json::object());
  for (const auto& c : j.at("columns")) t.columns.push_back({c.at("name"), c.at("type") == "text"});
  for (const auto& r : j.at("rows")) {
    if (r.size() != t.columns.size()) throw std::runtime_error("json: ragged row");
    std::vector<Cell> row;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (t.columns[k].text) row.emplace_back(r[k].get<std::string>());
      else if (r[k].is_string()) row.emplace_back(detail::parse_real(r[k].get<std::string>()));
      else row.emplace_back(r[k].get<double>());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Writes to a sibling temp file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& data) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(data.data(), std::streamsize(data.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// FNV-1a, 64 bit
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace kpztt
