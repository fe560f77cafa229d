// Copyright 2026 The multitest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULTITEST_REPORT_HPP_
#define MULTITEST_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace multitest {

enum class OutputFormat { kCsv, kMd, kJson };
OutputFormat parse_output_format(std::string_view name);

std::string_view library_version();

// Identifies how an output was produced. Deliberately excludes anything
// that varies between identical runs (time, host, worker count).
struct Provenance {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string config_hash;  // hex FNV-1a of the canonical config JSON
};

// 64-bit FNV-1a over the compact dump of `config`, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

nlohmann::json provenance_json(const Provenance& p);

using Cell = std::variant<std::monostate, bool, std::int64_t, double,
                          std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // free text printed under the table
  int precision = 6;               // significant digits in csv / md
};

// Shortest round-trippable text is used for json; csv and md use the
// table's precision. Non-finite doubles print as "inf", "-inf" or "nan".
std::string format_double(double v, int precision);

// csv: "# key: value" provenance lines, then each table as a header row
// followed by data rows, tables separated by a blank line.
// md:  a heading and pipe table per table, provenance at the end.
// json: {"provenance": ..., "tables": [{"name", "columns", "rows"}]}.
std::string render(const std::vector<Table>& tables, OutputFormat format,
                   const Provenance& provenance);

nlohmann::json table_json(const Table& table);

// Writes to `path`, or stdout when empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace multitest

#endif  // MULTITEST_REPORT_HPP_
