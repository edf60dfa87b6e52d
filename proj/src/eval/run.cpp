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
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "totr/core/digest.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/core/parallel.hpp"
#include "totr/curation.hpp"
#include "totr/retrieval_eval.hpp"
#include "totr/simd/kernels.hpp"
#include "totr/video.hpp"

namespace totr::eval {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ConfigName n) noexcept {
    switch (n) {
        case ConfigName::ToplineIdentity: return "ToplineIdentity";
        case ConfigName::GeneratedRecallProxy: return "GeneratedRecallProxy";
        case ConfigName::VideoDocuments: return "VideoDocuments";
    }
    return "ToplineIdentity";
}

ConfigName config_name_from_string(std::string_view s) {
    if (s == "ToplineIdentity") return ConfigName::ToplineIdentity;
    if (s == "GeneratedRecallProxy") return ConfigName::GeneratedRecallProxy;
    if (s == "VideoDocuments") return ConfigName::VideoDocuments;
    throw Error(Errc::InvalidArgument, "unknown eval config name '" + std::string(s) + "'");
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() || base.empty()) ? path : base / path;
}

void validate_k(std::span<const std::size_t> k_values) {
    if (k_values.empty()) throw Error(Errc::InvalidArgument, "k_values must not be empty");
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        if (k_values[i] == 0 || (i > 0 && k_values[i] <= k_values[i - 1])) {
            throw Error(Errc::InvalidArgument, "k_values must be strictly increasing and positive");
        }
    }
}

enum class SourceKind { Store, Records, Generated, Assets };

SourceKind detect_source(const fs::path& path) {
    if (path.extension() == ".t2me") return SourceKind::Store;
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) break;
        if (j.contains("record_id")) return SourceKind::Records;
        if (j.contains("generated_recall")) return SourceKind::Generated;
        if (j.contains("video_id")) return SourceKind::Assets;
        break;
    }
    throw Error(Errc::Malformed, "cannot tell what kind of source " + path.string() + " is");
}

struct Source {
    embedding::EmbeddingMatrix matrix;
    std::vector<curation::RecallRecord> records;  // filled for record sources
};

Source load_jsonl(const fs::path& path, SourceKind kind, bool is_query, const std::optional<std::string>& instruction,
                  clients::EmbedderClient& embedder, std::size_t batch_size) {
    Source src;
    std::vector<embedding::EmbedRequest> requests;
    std::vector<std::string> ids;
    jsonl::for_each_file(path, [&](const json& j, std::size_t) {
        switch (kind) {
            case SourceKind::Records: {
                auto r = curation::record_from_json(j);
                requests.push_back({is_query ? embedding::RequestKind::QueryText : embedding::RequestKind::DocumentText,
                                    instruction, r.recall_text, {}});
                ids.push_back(r.record_id);
                src.records.push_back(std::move(r));
                break;
            }
            case SourceKind::Generated:
                requests.push_back({embedding::RequestKind::DocumentText, instruction,
                                    jsonl::require_string(j, "generated_recall"), {}});
                ids.push_back(jsonl::require_string(j, "video_id"));
                break;
            case SourceKind::Assets: {
                auto asset = video::from_index_json(j);
                requests.push_back(embedding::video_document_request(asset, instruction));
                ids.push_back(asset.video_id);
                break;
            }
            case SourceKind::Store: break;
        }
    });
    src.matrix = embedding::embed_batch(requests, ids, embedder, batch_size);
    return src;
}

Source load_source(const fs::path& path, bool is_query, const EvalConfig& config, clients::EmbedderClient* embedder) {
    const SourceKind kind = detect_source(path);
    if (kind == SourceKind::Store) {
        Source src;
        src.matrix = embedding::load_store(path);
        return src;
    }
    if (!embedder) throw Error(Errc::InvalidArgument, path.string() + " needs an embedder (set embedder_url)");
    return load_jsonl(path, kind, is_query, is_query ? config.instruction : std::nullopt, *embedder, config.batch_size);
}

GoldMap gold_from_records(const std::vector<curation::RecallRecord>& records, ConfigName name) {
    GoldMap gold;
    for (const auto& r : records) {
        auto& ids = gold[r.record_id];
        if (name == ConfigName::ToplineIdentity) {
            ids.push_back(r.record_id);
            continue;
        }
        for (const auto& link : r.answer_links) {
            if (auto vid = curation::youtube_video_id(link)) {
                if (std::find(ids.begin(), ids.end(), *vid) == ids.end()) ids.push_back(*vid);
            }
        }
    }
    return gold;
}

GoldMap read_gold(const fs::path& path) {
    GoldMap gold;
    jsonl::for_each_file(path, [&](const json& j, std::size_t) {
        gold[jsonl::require_string(j, "query_id")] = j.at("gold_ids").get<std::vector<std::string>>();
    });
    return gold;
}

}  // namespace

embedding::EmbeddingMatrix embed_source(const fs::path& path, const std::optional<std::string>& instruction,
                                        clients::EmbedderClient& embedder, std::size_t batch_size) {
    const SourceKind kind = detect_source(path);
    if (kind == SourceKind::Store) throw Error(Errc::InvalidArgument, path.string() + " is already an embedding store");
    return load_jsonl(path, kind, instruction.has_value(), instruction, embedder, batch_size).matrix;
}

EvalConfig eval_config_from_json(const json& j, const fs::path& base_dir) {
    EvalConfig c;
    try {
        c.name = config_name_from_string(j.at("name").get<std::string>());
        c.query_source = resolve(base_dir, j.at("query_source").get<std::string>());
        c.doc_source = resolve(base_dir, j.at("doc_source").get<std::string>());
        if (j.contains("k_values")) c.k_values = j["k_values"].get<std::vector<std::size_t>>();
        if (auto a = jsonl::optional_string(j, "adapter")) c.adapter = resolve(base_dir, *a);
        if (auto g = jsonl::optional_string(j, "gold")) c.gold = resolve(base_dir, *g);
        c.embedder_url = jsonl::optional_string(j, "embedder_url");
        c.instruction = jsonl::optional_string(j, "instruction");
        c.batch_size = j.value("batch_size", c.batch_size);
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
    } catch (const json::exception& e) {
        throw Error(Errc::Malformed, std::string("eval config: ") + e.what());
    }
    validate_k(c.k_values);
    return c;
}

EvalConfig load_eval_config(const fs::path& path) {
    return eval_config_from_json(jsonl::read_json_file(path), path.parent_path());
}

json to_json(const EvalConfig& c) {
    json j;
    j["name"] = std::string(to_string(c.name));
    j["query_source"] = c.query_source.string();
    j["doc_source"] = c.doc_source.string();
    j["k_values"] = c.k_values;
    j["adapter"] = c.adapter ? json(c.adapter->string()) : json(nullptr);
    j["gold"] = c.gold ? json(c.gold->string()) : json(nullptr);
    j["embedder_url"] = c.embedder_url ? json(*c.embedder_url) : json(nullptr);
    j["instruction"] = c.instruction ? json(*c.instruction) : json(nullptr);
    j["batch_size"] = c.batch_size;
    j["seed"] = c.seed;
    return j;
}

EvalResult evaluate(const embedding::EmbeddingMatrix& queries_in, const embedding::EmbeddingMatrix& docs_in,
                    const GoldMap& gold, std::span<const std::size_t> k_values,
                    const contrastive::AdapterState* adapter, std::size_t workers) {
    validate_k(k_values);
    if (docs_in.empty()) throw Error(Errc::EmptyIndex, "document corpus is empty");
    if (queries_in.dim() != docs_in.dim()) throw Error(Errc::DimMismatch, "query and document dims differ");

    embedding::EmbeddingMatrix queries = queries_in.normalized() ? queries_in : embedding::normalize(queries_in);
    embedding::EmbeddingMatrix docs = docs_in.normalized() ? docs_in : embedding::normalize(docs_in);
    if (adapter) {
        queries = contrastive::apply_adapter(*adapter, queries);
        docs = contrastive::apply_adapter(*adapter, docs);
    }

    EvalResult result;
    result.k_values.assign(k_values.begin(), k_values.end());
    const std::size_t depth = k_values.back();

    struct Job {
        std::size_t row;
        std::unordered_set<std::string> golds;
    };
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < queries.rows(); ++r) {
        auto it = gold.find(queries.id(r));
        Job job{r, {}};
        if (it != gold.end()) {
            for (const auto& g : it->second) {
                if (docs.find(g)) job.golds.insert(g);
            }
        }
        if (job.golds.empty()) {
            ++result.n_excluded;
            continue;
        }
        jobs.push_back(std::move(job));
    }

    result.per_query.resize(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const auto hits = embedding::knn_search(docs, queries.row(jobs[i].row), depth);
        QueryOutcome& out = result.per_query[i];
        out.query_id = queries.id(jobs[i].row);
        for (std::size_t pos = 0; pos < hits.size(); ++pos) {
            out.top_ids.push_back(hits[pos].id);
            if (!out.rank && jobs[i].golds.contains(hits[pos].id)) out.rank = pos + 1;
        }
    });

    std::vector<Rank> ranks;
    ranks.reserve(result.per_query.size());
    for (const auto& q : result.per_query) ranks.push_back(q.rank);
    result.n_queries = ranks.size();
    for (std::size_t k : k_values) {
        result.recall.push_back(recall_at_k(ranks, k));
        result.mrr.push_back(mrr_at_k(ranks, k));
    }
    return result;
}

EvalResult run_eval(const EvalConfig& config, clients::EmbedderClient* embedder) {
    std::unique_ptr<clients::EmbedderClient> owned;
    if (!embedder && config.embedder_url) {
        owned = std::make_unique<clients::HttpEmbedderClient>(*config.embedder_url);
        embedder = owned.get();
    }
    Source queries = load_source(config.query_source, true, config, embedder);
    Source docs;
    const bool shared = config.name == ConfigName::ToplineIdentity &&
                        fs::weakly_canonical(config.query_source) == fs::weakly_canonical(config.doc_source);
    if (shared) {
        docs.matrix = queries.matrix;
    } else {
        docs = load_source(config.doc_source, false, config, embedder);
    }

    GoldMap gold;
    if (config.gold) {
        gold = read_gold(*config.gold);
    } else if (!queries.records.empty()) {
        gold = gold_from_records(queries.records, config.name);
    } else {
        for (const auto& id : queries.matrix.ids()) gold[id] = {id};
    }

    std::optional<contrastive::AdapterState> adapter;
    if (config.adapter) adapter = contrastive::load_adapter(*config.adapter);

    EvalResult result = evaluate(queries.matrix, docs.matrix, gold, config.k_values, adapter ? &*adapter : nullptr, config.workers);

    json manifest;
    manifest["config"] = to_json(config);
    manifest["config_sha256"] = digest::sha256_hex(to_json(config).dump());
    manifest["query_source_sha256"] = digest::sha256_file(config.query_source);
    manifest["doc_source_sha256"] = digest::sha256_file(config.doc_source);
    if (config.adapter) manifest["adapter_sha256"] = digest::sha256_file(*config.adapter);
    if (config.gold) manifest["gold_sha256"] = digest::sha256_file(*config.gold);
    manifest["seed"] = config.seed;
    manifest["simd"] = std::string(simd::isa_name(simd::active_isa()));
    result.manifest = std::move(manifest);
    return result;
}

std::string table_cell(double recall, double mrr) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f/%.1f", recall * 100.0, mrr * 100.0);
    return buf;
}

json to_json(const EvalResult& r) {
    json j;
    json table = json::object();
    json raw = json::object();
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        const std::string key = "@" + std::to_string(r.k_values[i]);
        table[key] = table_cell(r.recall[i], r.mrr[i]);
        raw[key] = {{"recall", r.recall[i]}, {"mrr", r.mrr[i]}};
    }
    j["table"] = std::move(table);
    j["metrics"] = std::move(raw);
    j["k_values"] = r.k_values;
    j["n_queries"] = r.n_queries;
    j["n_excluded"] = r.n_excluded;
    json per = json::array();
    for (const auto& q : r.per_query) {
        per.push_back({{"query_id", q.query_id}, {"rank", q.rank ? json(*q.rank) : json(nullptr)}, {"top_ids", q.top_ids}});
    }
    j["per_query"] = std::move(per);
    j["manifest"] = r.manifest;
    return j;
}

}  // namespace totr::eval
