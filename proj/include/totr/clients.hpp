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

// Service clients for the external judge, embedder, and NER services.
//
// Wire contracts (JSON over HTTP POST):
//   judge:    /v1/judge  {"prompt": str[, "image_paths": [str]]} -> {"text": str}
//   embedder: /v1/embed  {"instruction": str|null, "items": [{"text": str, "image_paths": [str]}]}
//                        -> {"dim": int, "vectors": [[float]]}
//   ner:      /v1/ner    {"text": str} -> {"spans": [{"start": int, "end": int, "label": str}]}
//
// The abstract interfaces are what the modules depend on; tests plug in
// scripted implementations.

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace totr::clients {

struct HttpOptions {
    std::chrono::milliseconds timeout{30000};
    int retries = 2;
};

struct JudgeRequest {
    std::string prompt;
    std::vector<std::string> image_paths;
};

class JudgeClient {
public:
    virtual ~JudgeClient() = default;
    /// Returns the judge's reply text, or nullopt when the service cannot be
    /// reached after the configured retries.
    virtual std::optional<std::string> complete(const JudgeRequest& request) = 0;
};

struct EmbedItem {
    std::string text;
    std::vector<std::string> image_paths;
};

struct EmbedResponse {
    std::size_t dim = 0;
    std::vector<std::vector<float>> vectors;
};

class EmbedderClient {
public:
    virtual ~EmbedderClient() = default;
    /// Throws Error(Unavailable) when the service fails after retries and
    /// Error(Malformed) when the reply violates the contract.
    virtual EmbedResponse embed(const std::optional<std::string>& instruction, std::span<const EmbedItem> items) = 0;
};

struct NerSpan {
    std::size_t start = 0;  // byte offsets into the submitted text
    std::size_t end = 0;
    std::string label;
};

class NerClient {
public:
    virtual ~NerClient() = default;
    /// nullopt when the service is unreachable.
    virtual std::optional<std::vector<NerSpan>> recognize(const std::string& text) = 0;
};

/// Splits "http://host:port/prefix" into the origin httplib wants and a path
/// prefix that endpoint paths are appended to.
struct Endpoint {
    std::string origin;
    std::string path_prefix;
};
Endpoint parse_endpoint(const std::string& base_url);

/// POST a JSON body, retrying on transport errors and 5xx. nullopt after the
/// last failed attempt.
std::optional<nlohmann::json> post_json(const Endpoint& endpoint, const std::string& path, const nlohmann::json& body,
                                        const HttpOptions& options);

class HttpJudgeClient final : public JudgeClient {
public:
    explicit HttpJudgeClient(const std::string& base_url, HttpOptions options = {});
    std::optional<std::string> complete(const JudgeRequest& request) override;

private:
    Endpoint endpoint_;
    HttpOptions options_;
};

class HttpEmbedderClient final : public EmbedderClient {
public:
    explicit HttpEmbedderClient(const std::string& base_url, HttpOptions options = {});
    EmbedResponse embed(const std::optional<std::string>& instruction, std::span<const EmbedItem> items) override;

private:
    Endpoint endpoint_;
    HttpOptions options_;
};

class HttpNerClient final : public NerClient {
public:
    explicit HttpNerClient(const std::string& base_url, HttpOptions options = {});
    std::optional<std::vector<NerSpan>> recognize(const std::string& text) override;

private:
    Endpoint endpoint_;
    HttpOptions options_;
};

nlohmann::json embed_request_json(const std::optional<std::string>& instruction, std::span<const EmbedItem> items);
EmbedResponse parse_embed_response(const nlohmann::json& reply, std::size_t expected_rows);

}  // namespace totr::clients
