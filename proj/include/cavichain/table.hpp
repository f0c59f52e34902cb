// Copyright 2026 The cavichain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAVICHAIN_TABLE_HPP
#define CAVICHAIN_TABLE_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cavichain/errors.hpp"
#include "cavichain/model.hpp"

namespace cavichain {

inline constexpr const char* kVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

/// One table cell: a number or a short text label.
using Cell = std::variant<double, std::string>;

enum class ColumnKind { real, complex_pair, text };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::real;
};

/// Columnar result container with a metadata header; serializes losslessly to
/// CSV (metadata as `#` preamble lines) and JSON ({meta, columns, rows}).
/// Complex columns expand to <name>_re, <name>_im. Field order is fixed by
/// insertion, so identical content gives identical bytes.
class ResultTable {
 public:
  ResultTable(std::string name, std::vector<Column> columns)
      : name_(std::move(name)), columns_(std::move(columns)) {}

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  ordered_json& meta() { return meta_; }
  const ordered_json& meta() const { return meta_; }

  std::vector<std::string> expanded_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) {
      if (c.kind == ColumnKind::complex_pair) {
        out.push_back(c.name + "_re");
        out.push_back(c.name + "_im");
      } else {
        out.push_back(c.name);
      }
    }
    return out;
  }

  /// Row builder: push cells in column order, complex columns as one value.
  class Row {
   public:
    Row& real(double v) {
      cells_.emplace_back(v);
      return *this;
    }
    Row& complex(cxd v) {
      cells_.emplace_back(v.real());
      cells_.emplace_back(v.imag());
      return *this;
    }
    Row& text(std::string s) {
      cells_.emplace_back(std::move(s));
      return *this;
    }

   private:
    friend class ResultTable;
    std::vector<Cell> cells_;
  };

  void add_row(Row row) {
    if (row.cells_.size() != expanded_names().size())
      throw length_mismatch("row does not match the table schema");
    rows_.push_back(std::move(row.cells_));
  }

  static std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  std::string to_csv() const {
    std::string out;
    for (const auto& [key, value] : meta_.items())
      out += "# " + key + " = " + value.dump() + "\n";
    const auto names = expanded_names();
    for (std::size_t i = 0; i < names.size(); ++i)
      out += (i ? "," : "") + names[i];
    out += "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        if (std::holds_alternative<double>(row[i]))
          out += format_number(std::get<double>(row[i]));
        else
          out += std::get<std::string>(row[i]);
      }
      out += "\n";
    }
    return out;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["meta"] = meta_;
    j["columns"] = expanded_names();
    ordered_json rows = ordered_json::array();
    for (const auto& row : rows_) {
      ordered_json r = ordered_json::array();
      for (const auto& cell : row) {
        if (std::holds_alternative<double>(cell))
          r.push_back(std::get<double>(cell));
        else
          r.push_back(std::get<std::string>(cell));
      }
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
  }

  /// Inverse of to_csv for round-trip checks; text cells are recognized by
  /// failing to parse as a number.
  static ResultTable from_csv(const std::string& text, const std::string& name) {
    ordered_json meta;
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t nl = text.find('\n', pos);
      lines.push_back(text.substr(pos, nl - pos));
      if (nl == std::string::npos) break;
      pos = nl + 1;
    }
    std::size_t li = 0;
    while (li < lines.size() && lines[li].starts_with("# ")) {
      const std::string& line = lines[li];
      const std::size_t eq = line.find(" = ");
      if (eq == std::string::npos) throw io_error("malformed metadata line");
      meta[line.substr(2, eq - 2)] = ordered_json::parse(line.substr(eq + 3));
      ++li;
    }
    if (li >= lines.size()) throw io_error("missing header row");
    std::vector<Column> cols;
    {
      std::vector<std::string> names;
      const std::string& header = lines[li++];
      std::size_t start = 0;
      while (start <= header.size()) {
        const std::size_t comma = header.find(',', start);
        names.push_back(header.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].ends_with("_re") && i + 1 < names.size() &&
            names[i + 1] == names[i].substr(0, names[i].size() - 3) + "_im") {
          cols.push_back({names[i].substr(0, names[i].size() - 3),
                          ColumnKind::complex_pair});
          ++i;
        } else {
          cols.push_back({names[i], ColumnKind::real});
        }
      }
    }
    ResultTable t(name, cols);
    t.meta_ = std::move(meta);
    for (; li < lines.size(); ++li) {
      if (lines[li].empty()) continue;
      std::vector<Cell> row;
      const std::string& line = lines[li];
      std::size_t start = 0;
      while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        const std::string field = line.substr(start, comma - start);
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end && *end == '\0' && end != field.c_str())
          row.emplace_back(v);
        else
          row.emplace_back(field);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      t.rows_.push_back(std::move(row));
    }
    return t;
  }

  static ResultTable from_json(const ordered_json& j, const std::string& name) {
    std::vector<Column> cols;
    const auto names = j.at("columns").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].ends_with("_re") && i + 1 < names.size() &&
          names[i + 1] == names[i].substr(0, names[i].size() - 3) + "_im") {
        cols.push_back(
            {names[i].substr(0, names[i].size() - 3), ColumnKind::complex_pair});
        ++i;
      } else {
        cols.push_back({names[i], ColumnKind::real});
      }
    }
    ResultTable t(name, cols);
    t.meta_ = j.at("meta");
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& cell : r) {
        if (cell.is_string())
          row.emplace_back(cell.get<std::string>());
        else
          row.emplace_back(cell.get<double>());
      }
      t.rows_.push_back(std::move(row));
    }
    return t;
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  ordered_json meta_;
};

/// Writes the table in each requested format under `directory`; returns the
/// paths written.
inline std::vector<std::string> emit(const ResultTable& table,
                                     std::span<const std::string> formats,
                                     const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw io_error("cannot create output directory " + directory);
  std::vector<std::string> written;
  for (const auto& fmt : formats) {
    std::string path = directory + "/" + table.name();
    std::string payload;
    if (fmt == "csv") {
      path += ".csv";
      payload = table.to_csv();
    } else if (fmt == "json") {
      path += ".json";
      payload = table.to_json().dump(2) + "\n";
    } else {
      throw config_error("unknown output format: " + fmt);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open " + path);
    f << payload;
    if (!f) throw io_error("failed writing " + path);
    written.push_back(std::move(path));
  }
  return written;
}

}  // namespace cavichain

#endif  // CAVICHAIN_TABLE_HPP
