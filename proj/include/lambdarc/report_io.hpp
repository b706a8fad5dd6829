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

#ifndef LAMBDARC_REPORT_IO_HPP
#define LAMBDARC_REPORT_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lambdarc/allocator.hpp"

namespace lambdarc {

// Shortest text that round-trips to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Minimal comma-separated table; cells never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

inline const std::vector<std::string> kFrameCsvHeader = {
    "sequence_id", "minigop_index", "frame_index", "lambda",     "budget_bpp",
    "actual_bpp",  "actual_mse",    "buffer_after", "clamp_flag"};

// none | minigop_high | minigop_low | lambda_high | lambda_low
std::string clamp_flag(const EncodeReport& report, const FrameRecord& frame);

// Appends one row per frame of every report.
void append_frame_rows(CsvTable& table, const std::string& sequence_id,
                       const std::vector<EncodeReport>& reports);

}  // namespace lambdarc

#endif  // LAMBDARC_REPORT_IO_HPP
