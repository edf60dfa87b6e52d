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

// Recall@k / MRR@k and the three document-set evaluation configurations.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "totr/clients.hpp"
#include "totr/contrastive.hpp"
#include "totr/embedding.hpp"

namespace totr::eval {

/// 1-based gold rank; nullopt when the gold fell outside the searched depth.
using Rank = std::optional<std::size_t>;

double recall_at_k(std::span<const Rank> ranks, std::size_t k);
double mrr_at_k(std::span<const Rank> ranks, std::size_t k);

enum class ConfigName { ToplineIdentity, GeneratedRecallProxy, VideoDocuments };

std::string_view to_string(ConfigName n) noexcept;
ConfigName config_name_from_string(std::string_view s);

/// eval.json. Paths are resolved against the config file's directory.
///   name          ToplineIdentity | GeneratedRecallProxy | VideoDocuments
///   query_source  records.jsonl or a .t2me store of query vectors
///   doc_source    .t2me, records.jsonl (topline), generated.jsonl, or assets_index.jsonl
///   k_values      strictly increasing, default [1, 10, 100]
///   adapter       optional adapter.json, applied to both sides
///   gold          optional jsonl of {"query_id", "gold_ids": [...]}
///   embedder_url  needed when either source is not a .t2me store
///   instruction   optional query instruction
///   batch_size, seed, workers
struct EvalConfig {
    ConfigName name = ConfigName::ToplineIdentity;
    std::filesystem::path query_source;
    std::filesystem::path doc_source;
    std::vector<std::size_t> k_values{1, 10, 100};
    std::optional<std::filesystem::path> adapter;
    std::optional<std::filesystem::path> gold;
    std::optional<std::string> embedder_url;
    std::optional<std::string> instruction;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

EvalConfig eval_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
EvalConfig load_eval_config(const std::filesystem::path& path);
nlohmann::json to_json(const EvalConfig& c);

/// query id -> acceptable document ids
using GoldMap = std::map<std::string, std::vector<std::string>>;

struct QueryOutcome {
    std::string query_id;
    Rank rank;
    std::vector<std::string> top_ids;  // up to max(k_values)
};

struct EvalResult {
    std::vector<std::size_t> k_values;
    std::vector<double> recall;
    std::vector<double> mrr;
    std::size_t n_queries = 0;
    std::size_t n_excluded = 0;  // queries with no gold document in the corpus
    std::vector<QueryOutcome> per_query;
    nlohmann::json manifest;
};

/// Core evaluation over embedded queries and documents. Gold rank is the
/// best rank among the query's gold ids. Queries whose gold ids are all
/// missing from `docs` are excluded and counted.
EvalResult evaluate(const embedding::EmbeddingMatrix& queries, const embedding::EmbeddingMatrix& docs, const GoldMap& gold,
                    std::span<const std::size_t> k_values, const contrastive::AdapterState* adapter = nullptr,
                    std::size_t workers = 1);

/// Loads sources, embeds where needed, and evaluates. `embedder` overrides
/// config.embedder_url when given.
EvalResult run_eval(const EvalConfig& config, clients::EmbedderClient* embedder = nullptr);

/// Embeds records.jsonl, generated.jsonl, or assets_index.jsonl (detected
/// from the first line). Records embed as queries when an instruction is
/// given and as documents otherwise.
embedding::EmbeddingMatrix embed_source(const std::filesystem::path& path, const std::optional<std::string>& instruction,
                                        clients::EmbedderClient& embedder, std::size_t batch_size = 32);

/// "recall/mrr" as percentages with one decimal, e.g. "96.5/96.5".
std::string table_cell(double recall, double mrr);

nlohmann::json to_json(const EvalResult& r);

}  // namespace totr::eval
