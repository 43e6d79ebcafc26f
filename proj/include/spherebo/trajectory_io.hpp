// Copyright 2026 The SphereBO Authors. All Rights Reserved.
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
// =============================================================================

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "spherebo/engine.hpp"

namespace spherebo {

/// One JSONL line, without the trailing newline. Floats use 17 significant
/// digits; non-finite values are written as null.
std::string to_json_line(const TrajectoryRecord& record);

/// Throws MalformedInput.
TrajectoryRecord parse_json_line(const std::string& line);

/// Reads every complete line. A final line without newline is ignored as a
/// torn write; any other malformed line throws MalformedInput.
std::vector<TrajectoryRecord> read_trajectory(std::istream& in);
std::vector<TrajectoryRecord> read_trajectory(const std::filesystem::path& path);

std::string format_double(double v);

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// Config documents. A document holds either one run (RunConfig fields at
/// the top level) or a suite: {"runs": [...], "seeds": [...], "parallel": k}.
/// Keys of the top level apply to every entry of "runs". Unknown keys and
/// missing required fields throw InvalidConfig naming the field.
struct ConfigDocument {
  std::vector<RunConfig> runs;
  std::vector<std::uint64_t> seeds;
  bool is_suite = false;
  int parallel = 1;
  std::filesystem::path out_dir;
};

ConfigDocument parse_config(const std::string& text);
ConfigDocument load_config(const std::filesystem::path& path);

}  // namespace spherebo
