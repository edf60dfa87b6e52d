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

// Read-only search service over a loaded video index.

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "totr/clients.hpp"
#include "totr/contrastive.hpp"
#include "totr/embedding.hpp"
#include "totr/video.hpp"

namespace totr::service {

inline constexpr std::size_t kMaxK = 100;
inline constexpr std::size_t kDefaultK = 10;
inline constexpr std::size_t kSnippetBytes = 240;
inline constexpr std::size_t kMaxScenePaths = 3;

struct ServiceConfig {
    std::filesystem::path index_path;    // video .t2me store
    std::filesystem::path assets_index;  // assets_index.jsonl
    std::filesystem::path media_root;    // served under /media/; empty disables
    std::map<std::string, std::filesystem::path> adapters;
    std::optional<std::string> default_adapter;
    std::optional<std::string> embedder_url;
    bool prepend_instruction = true;
    std::filesystem::path feedback_log = "feedback.jsonl";
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
};

struct SearchRequest {
    std::string query_text;
    std::size_t k = kDefaultK;
    std::optional<std::string> adapter;
};

SearchRequest search_request_from_json(const nlohmann::json& j);

struct SearchResult {
    std::string video_id;
    double score = 0.0;
    std::string title;
    std::vector<std::string> top_scene_paths;
    std::string transcript_snippet;
};

struct SearchResponse {
    std::vector<SearchResult> results;
    double latency_ms = 0.0;
    std::string index_version;
};

nlohmann::json to_json(const SearchResponse& r);

/// Everything a search reads. Immutable once built.
struct IndexSnapshot {
    std::string version;
    embedding::EmbeddingMatrix base;
    std::map<std::string, contrastive::AdapterState> adapters;
    std::map<std::string, embedding::EmbeddingMatrix> adapted;
    std::map<std::string, video::VideoAsset> assets;
    nlohmann::json hashes;
};

/// Throws Error(NotFound) with a hint when the index or assets file is missing.
std::shared_ptr<const IndexSnapshot> load_snapshot(const ServiceConfig& config);

class SearchEngine {
public:
    /// `embedder` overrides config.embedder_url; it must outlive the engine.
    explicit SearchEngine(ServiceConfig config, clients::EmbedderClient* embedder = nullptr);

    SearchResponse search(const SearchRequest& request) const;
    std::optional<nlohmann::json> asset(const std::string& video_id) const;
    nlohmann::json health() const;
    void feedback(const std::string& query_id, const std::string& chosen_video_id);

    /// Loads a fresh snapshot and swaps it in. Searches already running keep
    /// the snapshot they started with.
    void reload();

    std::shared_ptr<const IndexSnapshot> snapshot() const;
    const ServiceConfig& config() const noexcept { return config_; }

private:
    ServiceConfig config_;
    std::unique_ptr<clients::EmbedderClient> owned_embedder_;
    clients::EmbedderClient* embedder_ = nullptr;
    mutable std::mutex snap_mu_;
    std::shared_ptr<const IndexSnapshot> snap_;
    std::mutex feedback_mu_;
};

class Server {
public:
    explicit Server(SearchEngine& engine);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts serving on a background thread; returns the bound port.
    int start();
    void stop();
    int port() const noexcept { return port_; }

    /// Blocks until stop() is called from elsewhere.
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace totr::service
