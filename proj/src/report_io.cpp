// Copyright 2026 The lambdarc Authors
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

#include "lambdarc/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lambdarc/error.hpp"

namespace lambdarc {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    fail(ErrorKind::kParse, "malformed number '" + text + "'");
  }
  return value;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorKind::kParse, "CSV lacks column '" + name + "'");
}

const std::string& CsvTable::cell(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  return parse_double(cell(row, name));
}

namespace {

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_line(out, table.header);
  for (const auto& row : table.rows) append_line(out, row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      fail(ErrorKind::kParse, "CSV line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  require(!table.header.empty(), ErrorKind::kParse, "CSV has no header");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed for " + path.string());
}

std::string clamp_flag(const EncodeReport& report, const FrameRecord& frame) {
  switch (report.plan.clamp) {
    case ClampStatus::kClampedHigh: return "minigop_high";
    case ClampStatus::kClampedLow: return "minigop_low";
    case ClampStatus::kInRange: break;
  }
  switch (frame.lambda_clamp) {
    case LambdaClamp::kHigh: return "lambda_high";
    case LambdaClamp::kLow: return "lambda_low";
    case LambdaClamp::kNone: break;
  }
  return "none";
}

void append_frame_rows(CsvTable& table, const std::string& sequence_id,
                       const std::vector<EncodeReport>& reports) {
  if (table.header.empty()) table.header = kFrameCsvHeader;
  for (std::size_t g = 0; g < reports.size(); ++g) {
    for (const FrameRecord& f : reports[g].frames) {
      table.rows.push_back({sequence_id, std::to_string(g), std::to_string(f.frame_index),
                            format_double(f.lambda), format_double(f.budget_bpp),
                            format_double(f.actual_bpp), format_double(f.actual_mse),
                            format_double(f.buffer_after), clamp_flag(reports[g], f)});
    }
  }
}

}  // namespace lambdarc
