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

#include <chrono>
#include <fstream>

#include "totr/core/digest.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/core/text.hpp"
#include "totr/service.hpp"

namespace totr::service {

namespace fs = std::filesystem;
using nlohmann::json;

SearchRequest search_request_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::InvalidArgument, "search body must be a JSON object");
    SearchRequest r;
    r.query_text = jsonl::require_string(j, "query_text");
    if (j.contains("k") && !j["k"].is_null()) {
        if (!j["k"].is_number_integer()) throw Error(Errc::InvalidArgument, "k must be an integer");
        const auto k = j["k"].get<long long>();
        if (k < 1 || k > static_cast<long long>(kMaxK)) throw Error(Errc::InvalidArgument, "k must be in 1..100");
        r.k = static_cast<std::size_t>(k);
    }
    r.adapter = jsonl::optional_string(j, "adapter");
    return r;
}

json to_json(const SearchResponse& r) {
    json results = json::array();
    for (const auto& h : r.results) {
        results.push_back({{"video_id", h.video_id},
                           {"score", h.score},
                           {"title", h.title},
                           {"top_scene_paths", h.top_scene_paths},
                           {"transcript_snippet", h.transcript_snippet}});
    }
    return {{"results", std::move(results)}, {"latency_ms", r.latency_ms}, {"index_version", r.index_version}};
}

namespace {

std::vector<std::string> scene_paths(const video::VideoAsset& a) {
    std::vector<std::string> out;
    auto push = [&](const video::Scene& s) {
        if (out.size() < kMaxScenePaths) out.push_back("/media/" + a.video_id + "/" + s.image_path);
    };
    if (!a.deduped_scene_indices.empty()) {
        for (int idx : a.deduped_scene_indices) {
            for (const auto& s : a.scenes) {
                if (s.index == idx) push(s);
            }
        }
    } else {
        for (const auto& s : a.scenes) push(s);
    }
    return out;
}

}  // namespace

std::shared_ptr<const IndexSnapshot> load_snapshot(const ServiceConfig& config) {
    if (config.index_path.empty() || !fs::is_regular_file(config.index_path)) {
        throw Error(Errc::NotFound, "video index '" + config.index_path.string() +
                                        "' not found; build it with `totr embed --in assets_index.jsonl --out videos.t2me` and pass --index");
    }
    auto snap = std::make_shared<IndexSnapshot>();
    snap->base = embedding::load_store(config.index_path);
    if (snap->base.empty()) throw Error(Errc::EmptyIndex, "video index '" + config.index_path.string() + "' is empty");
    if (!snap->base.normalized()) snap->base = embedding::normalize(snap->base);

    std::string version_src = digest::sha256_file(config.index_path);
    snap->hashes["index"] = {{"path", config.index_path.string()}, {"sha256", version_src}};

    if (!config.assets_index.empty()) {
        if (!fs::is_regular_file(config.assets_index)) {
            throw Error(Errc::NotFound, "assets index '" + config.assets_index.string() +
                                            "' not found; build it with `totr assets`");
        }
        jsonl::for_each_file(config.assets_index, [&](const json& j, std::size_t) {
            auto a = video::from_index_json(j);
            std::string id = a.video_id;
            snap->assets.emplace(std::move(id), std::move(a));
        });
        const auto h = digest::sha256_file(config.assets_index);
        snap->hashes["assets_index"] = {{"path", config.assets_index.string()}, {"sha256", h}};
        version_src += h;
    }

    json adapters = json::object();
    for (const auto& [name, path] : config.adapters) {
        auto a = contrastive::load_adapter(path);
        snap->adapted.emplace(name, contrastive::apply_adapter(a, snap->base));
        snap->adapters.emplace(name, std::move(a));
        const auto h = digest::sha256_file(path);
        adapters[name] = {{"path", path.string()}, {"sha256", h}};
        version_src += name + h;
    }
    snap->hashes["adapters"] = std::move(adapters);
    if (config.default_adapter && !snap->adapters.contains(*config.default_adapter)) {
        throw Error(Errc::InvalidArgument, "default adapter '" + *config.default_adapter + "' is not configured");
    }
    snap->version = digest::sha256_hex(version_src).substr(0, 16);
    return snap;
}

SearchEngine::SearchEngine(ServiceConfig config, clients::EmbedderClient* embedder) : config_(std::move(config)) {
    if (embedder) {
        embedder_ = embedder;
    } else if (config_.embedder_url) {
        owned_embedder_ = std::make_unique<clients::HttpEmbedderClient>(*config_.embedder_url);
        embedder_ = owned_embedder_.get();
    } else {
        throw Error(Errc::InvalidArgument, "search needs an embedder; set embedder_url");
    }
    snap_ = load_snapshot(config_);
}

std::shared_ptr<const IndexSnapshot> SearchEngine::snapshot() const {
    std::lock_guard lock(snap_mu_);
    return snap_;
}

void SearchEngine::reload() {
    auto fresh = load_snapshot(config_);
    std::lock_guard lock(snap_mu_);
    snap_ = std::move(fresh);
}

SearchResponse SearchEngine::search(const SearchRequest& request) const {
    const auto t0 = std::chrono::steady_clock::now();
    if (text::trim(request.query_text).empty()) throw Error(Errc::InvalidArgument, "query_text must not be empty");
    if (request.k < 1 || request.k > kMaxK) throw Error(Errc::InvalidArgument, "k must be in 1..100");
    const auto snap = snapshot();

    const contrastive::AdapterState* adapter = nullptr;
    const embedding::EmbeddingMatrix* index = &snap->base;
    const std::optional<std::string> name = request.adapter ? request.adapter : config_.default_adapter;
    if (name && *name != "none") {
        auto it = snap->adapters.find(*name);
        if (it == snap->adapters.end()) throw Error(Errc::InvalidArgument, "unknown adapter '" + *name + "'");
        adapter = &it->second;
        index = &snap->adapted.at(*name);
    }

    embedding::EmbedRequest req;
    req.kind = embedding::RequestKind::QueryText;
    if (config_.prepend_instruction) req.instruction = std::string(embedding::kRetrievalInstruction);
    req.text = request.query_text;
    const std::string qid = "query";
    auto q = embedding::normalize(embedding::embed_batch(std::span(&req, 1), std::span(&qid, 1), *embedder_));
    if (adapter) q = contrastive::apply_adapter(*adapter, q);

    SearchResponse resp;
    resp.index_version = snap->version;
    for (const auto& hit : embedding::knn_search(*index, q.row(0), request.k)) {
        SearchResult r;
        r.video_id = hit.id;
        r.score = hit.score;
        if (auto it = snap->assets.find(hit.id); it != snap->assets.end()) {
            r.title = it->second.title;
            r.top_scene_paths = scene_paths(it->second);
            r.transcript_snippet = text::utf8_truncate(it->second.transcript, kSnippetBytes);
        }
        resp.results.push_back(std::move(r));
    }
    resp.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return resp;
}

std::optional<json> SearchEngine::asset(const std::string& video_id) const {
    const auto snap = snapshot();
    auto it = snap->assets.find(video_id);
    if (it == snap->assets.end()) return std::nullopt;
    const auto& a = it->second;
    json scenes = json::array();
    for (const auto& s : a.scenes) {
        scenes.push_back({{"index", s.index},
                          {"start_s", s.start_s},
                          {"path", "/media/" + a.video_id + "/" + s.image_path},
                          {"ocr_text", s.ocr_text}});
    }
    return json{{"video_id", a.video_id},
                {"title", a.title},
                {"duration_s", a.duration_s ? json(*a.duration_s) : json(nullptr)},
                {"view_count", a.view_count ? json(*a.view_count) : json(nullptr)},
                {"upload_date", a.upload_date ? json(*a.upload_date) : json(nullptr)},
                {"scenes", std::move(scenes)},
                {"deduped_scene_indices", a.deduped_scene_indices},
                {"top_scene_paths", scene_paths(a)},
                {"transcript", a.transcript},
                {"indexed", snap->base.find(a.video_id).has_value()}};
}

json SearchEngine::health() const {
    const auto snap = snapshot();
    return {{"status", "ok"},
            {"index_version", snap->version},
            {"rows", snap->base.rows()},
            {"dim", snap->base.dim()},
            {"assets", snap->assets.size()},
            {"instruction", config_.prepend_instruction},
            {"corpus", snap->hashes}};
}

void SearchEngine::feedback(const std::string& query_id, const std::string& chosen_video_id) {
    if (query_id.empty() || chosen_video_id.empty()) {
        throw Error(Errc::InvalidArgument, "feedback needs query_id and chosen_video_id");
    }
    const auto snap = snapshot();
    if (!snap->base.find(chosen_video_id)) throw Error(Errc::NotFound, "unknown video '" + chosen_video_id + "'");
    const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    const json line{{"query_id", query_id},
                    {"chosen_video_id", chosen_video_id},
                    {"index_version", snap->version},
                    {"received_at_ms", now}};
    std::lock_guard lock(feedback_mu_);
    if (config_.feedback_log.has_parent_path()) fs::create_directories(config_.feedback_log.parent_path());
    std::ofstream out(config_.feedback_log, std::ios::app);
    if (!out) throw Error(Errc::Io, "cannot append to " + config_.feedback_log.string());
    out << line.dump() << '\n';
}

}  // namespace totr::service
