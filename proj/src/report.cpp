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

#include "multitest/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "multitest/error.hpp"

#ifndef MULTITEST_VERSION
#define MULTITEST_VERSION "0.0.0"
#endif

namespace multitest {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "md") return OutputFormat::kMd;
  if (name == "json") return OutputFormat::kJson;
  throw ValidationError("format must be csv, md or json");
}

std::string_view library_version() { return MULTITEST_VERSION; }

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json provenance_json(const Provenance& p) {
  json j = {{"tool", "multitest"},
            {"version", std::string(library_version())},
            {"command", p.command}};
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  j["config_hash"] = p.config_hash;
  return j;
}

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c, int precision) {
  return std::visit(
      [precision](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v, precision);
        } else {
          return v;
        }
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v, 6);
          return v;
        } else {
          return v;
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

json table_json(const Table& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row = json::object();
    for (std::size_t c = 0; c < table.columns.size() && c < r.size(); ++c) {
      row[table.columns[c]] = cell_json(r[c]);
    }
    rows.push_back(std::move(row));
  }
  json j = {{"name", table.name}, {"columns", table.columns}, {"rows", rows}};
  if (!table.notes.empty()) j["notes"] = table.notes;
  return j;
}

std::string render(const std::vector<Table>& tables, OutputFormat format,
                   const Provenance& provenance) {
  std::ostringstream os;
  const json prov = provenance_json(provenance);
  switch (format) {
    case OutputFormat::kJson: {
      json j = {{"schema_version", "1"}, {"provenance", prov}};
      json ts = json::array();
      for (const auto& t : tables) ts.push_back(table_json(t));
      j["tables"] = std::move(ts);
      os << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::kCsv: {
      for (const auto& [key, value] : prov.items()) {
        os << "# " << key << ": "
           << (value.is_string() ? value.get<std::string>() : value.dump())
           << '\n';
      }
      bool first = true;
      for (const auto& t : tables) {
        if (!first) os << '\n';
        first = false;
        if (tables.size() > 1) os << "# table: " << t.name << '\n';
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
          os << (c ? "," : "") << csv_escape(t.columns[c]);
        }
        os << '\n';
        for (const auto& r : t.rows) {
          for (std::size_t c = 0; c < r.size(); ++c) {
            os << (c ? "," : "") << csv_escape(cell_text(r[c], t.precision));
          }
          os << '\n';
        }
        for (const auto& n : t.notes) os << "# " << n << '\n';
      }
      break;
    }
    case OutputFormat::kMd: {
      for (const auto& t : tables) {
        os << "## " << t.name << "\n\n|";
        for (const auto& c : t.columns) os << ' ' << md_escape(c) << " |";
        os << "\n|";
        for (std::size_t c = 0; c < t.columns.size(); ++c) os << "---|";
        os << '\n';
        for (const auto& r : t.rows) {
          os << '|';
          for (const auto& cell : r) {
            os << ' ' << md_escape(cell_text(cell, t.precision)) << " |";
          }
          os << '\n';
        }
        if (!t.notes.empty()) {
          os << '\n';
          for (const auto& n : t.notes) os << n << "\n\n";
        } else {
          os << '\n';
        }
      }
      os << "<!-- provenance: " << prov.dump() << " -->\n";
      break;
    }
  }
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

}  // namespace multitest
