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

#include <algorithm>
#include <numeric>
#include <random>

#include "totr/contrastive.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/parallel.hpp"

namespace totr::contrastive {
namespace {

// splitmix64 finalizer: decorrelates per-anchor seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

MiningResult mine_hard_negatives(const embedding::EmbeddingMatrix& recalls, const MiningOptions& options) {
    if (!recalls.normalized()) throw Error(Errc::InvalidArgument, "mining requires a normalized matrix");
    if (options.pool_size == 0 || options.per_sample == 0) throw Error(Errc::InvalidArgument, "pool and per-sample must be positive");
    MiningResult result;
    const std::size_t n = recalls.rows();
    if (n < 2) {
        result.warnings.push_back("fewer than two recalls; no negatives mined");
        for (const auto& id : recalls.ids()) result.negatives[id] = {};
        return result;
    }
    const std::size_t pool = std::min(options.pool_size, n - 1);
    if (n - 1 <= options.pool_size) {
        result.warnings.push_back("corpus of " + std::to_string(n) + " is not larger than pool " +
                                  std::to_string(options.pool_size) + "; pool is all other recalls");
    }

    std::vector<std::vector<std::string>> mined(n);
    parallel_for(n, options.workers, [&](std::size_t anchor) {
        std::vector<double> scores(n);
        embedding::score_all(recalls, recalls.row(anchor), scores);
        std::vector<std::size_t> others;
        others.reserve(n - 1);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != anchor) others.push_back(r);
        }
        auto before = [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return recalls.id(a) < recalls.id(b);
        };
        std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(pool), others.end(), before);
        others.resize(pool);

        std::mt19937_64 rng(mix(options.seed ^ mix(anchor)));
        const std::size_t take = std::min(options.per_sample, pool);
        // partial Fisher-Yates over the pool
        for (std::size_t i = 0; i < take; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool - 1);
            std::swap(others[i], others[pick(rng)]);
            mined[anchor].push_back(recalls.id(others[i]));
        }
    });
    for (std::size_t r = 0; r < n; ++r) result.negatives.emplace(recalls.id(r), std::move(mined[r]));
    return result;
}

nlohmann::json to_json(const TrainingPair& p) {
    return nlohmann::json{{"query_id", p.query_id}, {"positive_id", p.positive_id}, {"hard_negative_ids", p.hard_negative_ids}};
}

TrainingPair pair_from_json(const nlohmann::json& j) {
    TrainingPair p;
    p.query_id = j.at("query_id").get<std::string>();
    p.positive_id = j.at("positive_id").get<std::string>();
    if (j.contains("hard_negative_ids")) p.hard_negative_ids = j["hard_negative_ids"].get<std::vector<std::string>>();
    if (std::find(p.hard_negative_ids.begin(), p.hard_negative_ids.end(), p.positive_id) != p.hard_negative_ids.end()) {
        throw Error(Errc::InvalidArgument, "pair " + p.query_id + ": positive listed as a hard negative");
    }
    return p;
}

}  // namespace totr::contrastive
