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

#include "totr/core/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "totr/core/errors.hpp"

namespace totr::jsonl {

std::size_t for_each(std::istream& in, const std::function<void(const json&, std::size_t)>& on_record) {
    std::size_t malformed = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json value = json::parse(line, nullptr, false);
        if (value.is_discarded()) {
            ++malformed;
            continue;
        }
        on_record(value, line_no);
    }
    return malformed;
}

std::size_t for_each_file(const std::filesystem::path& path,
                          const std::function<void(const json&, std::size_t)>& on_record) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    return for_each(in, on_record);
}

std::vector<json> read_file(const std::filesystem::path& path) {
    std::vector<json> out;
    for_each_file(path, [&](const json& v, std::size_t) { out.push_back(v); });
    return out;
}

void write_line(std::ostream& out, const json& value) {
    out << value.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

void write_file(const std::filesystem::path& path, const std::vector<json>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    for (const auto& v : values) write_line(out, v);
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    json value = json::parse(in, nullptr, false);
    if (value.is_discarded()) throw Error(Errc::Malformed, "invalid JSON in " + path.string());
    return value;
}

void write_json_file(const std::filesystem::path& path, const json& value, int indent) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << value.dump(indent, ' ', false, json::error_handler_t::replace) << '\n';
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << contents;
}

std::string require_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw Error(Errc::Malformed, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

double require_number(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) throw Error(Errc::Malformed, std::string("missing numeric field '") + key + "'");
    return it->get<double>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(Errc::Malformed, std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

std::optional<double> optional_number(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw Error(Errc::Malformed, std::string("field '") + key + "' is not a number");
    return it->get<double>();
}

std::optional<long long> optional_integer(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) throw Error(Errc::Malformed, std::string("field '") + key + "' is not an integer");
    return it->get<long long>();
}

std::optional<bool> optional_bool(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_boolean()) throw Error(Errc::Malformed, std::string("field '") + key + "' is not a boolean");
    return it->get<bool>();
}

}  // namespace totr::jsonl
