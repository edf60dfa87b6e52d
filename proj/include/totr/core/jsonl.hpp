// Copyright 2026 The totr Authors
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

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace totr::jsonl {

using nlohmann::json;

/// Calls `on_record` for every non-blank line that parses as JSON. Lines that
/// fail to parse are counted and skipped. Returns the malformed count.
std::size_t for_each(std::istream& in, const std::function<void(const json&, std::size_t line_no)>& on_record);

std::size_t for_each_file(const std::filesystem::path& path,
                          const std::function<void(const json&, std::size_t line_no)>& on_record);

std::vector<json> read_file(const std::filesystem::path& path);

void write_line(std::ostream& out, const json& value);

void write_file(const std::filesystem::path& path, const std::vector<json>& values);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& value, int indent = 2);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

// Typed field accessors. Missing or wrongly-typed required fields throw
// Error(Malformed) naming the field.
std::string require_string(const json& obj, const char* key);
double require_number(const json& obj, const char* key);
std::optional<std::string> optional_string(const json& obj, const char* key);
std::optional<double> optional_number(const json& obj, const char* key);
std::optional<long long> optional_integer(const json& obj, const char* key);
std::optional<bool> optional_bool(const json& obj, const char* key);

}  // namespace totr::jsonl
