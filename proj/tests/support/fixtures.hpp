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

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "totr/core/jsonl.hpp"

namespace totr::testing {

inline std::filesystem::path data_dir() { return TOTR_TEST_DATA; }

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::path(TOTR_TEST_TMP) / (name + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& p) { return jsonl::read_file(p); }

inline std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<float> g;
    std::vector<float> v(dim);
    for (auto& x : v) x = g(rng);
    return v;
}

inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<double> v(dim);
    double n = 0;
    for (auto& x : v) {
        x = g(rng);
        n += x * x;
    }
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    return v;
}

}  // namespace totr::testing
