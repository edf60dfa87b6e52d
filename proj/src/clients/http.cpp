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

#include "httplib.h"

#include "totr/clients.hpp"
#include "totr/core/errors.hpp"

namespace totr::clients {

using nlohmann::json;

Endpoint parse_endpoint(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) throw Error(Errc::InvalidArgument, "URL needs a scheme: " + base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    Endpoint ep;
    if (path_start == std::string::npos) {
        ep.origin = base_url;
    } else {
        ep.origin = base_url.substr(0, path_start);
        ep.path_prefix = base_url.substr(path_start);
        while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
    }
    return ep;
}

std::optional<json> post_json(const Endpoint& endpoint, const std::string& path, const json& body,
                              const HttpOptions& options) {
    httplib::Client client(endpoint.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    const std::string payload = body.dump();
    for (int attempt = 0; attempt <= options.retries; ++attempt) {
        auto res = client.Post(endpoint.path_prefix + path, payload, "application/json");
        if (!res || res->status >= 500) continue;
        if (res->status != 200) return std::nullopt;
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) return std::nullopt;
        return reply;
    }
    return std::nullopt;
}

HttpJudgeClient::HttpJudgeClient(const std::string& base_url, HttpOptions options)
    : endpoint_(parse_endpoint(base_url)), options_(options) {}

std::optional<std::string> HttpJudgeClient::complete(const JudgeRequest& request) {
    json body = {{"prompt", request.prompt}};
    if (!request.image_paths.empty()) body["image_paths"] = request.image_paths;
    auto reply = post_json(endpoint_, "/v1/judge", body, options_);
    if (!reply || !reply->contains("text") || !(*reply)["text"].is_string()) return std::nullopt;
    return (*reply)["text"].get<std::string>();
}

json embed_request_json(const std::optional<std::string>& instruction, std::span<const EmbedItem> items) {
    json body;
    body["instruction"] = instruction ? json(*instruction) : json(nullptr);
    json arr = json::array();
    for (const auto& item : items) arr.push_back({{"text", item.text}, {"image_paths", item.image_paths}});
    body["items"] = std::move(arr);
    return body;
}

EmbedResponse parse_embed_response(const json& reply, std::size_t expected_rows) {
    if (!reply.is_object() || !reply.contains("dim") || !reply.contains("vectors") || !reply["vectors"].is_array()) {
        throw Error(Errc::Malformed, "embedder reply missing dim/vectors");
    }
    EmbedResponse out;
    out.dim = reply["dim"].get<std::size_t>();
    for (const auto& row : reply["vectors"]) {
        if (!row.is_array() || row.size() != out.dim) throw Error(Errc::DimMismatch, "embedder row length differs from dim");
        out.vectors.push_back(row.get<std::vector<float>>());
    }
    if (out.vectors.size() != expected_rows) {
        throw Error(Errc::Malformed, "embedder returned " + std::to_string(out.vectors.size()) + " rows for " +
                                         std::to_string(expected_rows) + " items");
    }
    return out;
}

HttpEmbedderClient::HttpEmbedderClient(const std::string& base_url, HttpOptions options)
    : endpoint_(parse_endpoint(base_url)), options_(options) {}

EmbedResponse HttpEmbedderClient::embed(const std::optional<std::string>& instruction, std::span<const EmbedItem> items) {
    auto reply = post_json(endpoint_, "/v1/embed", embed_request_json(instruction, items), options_);
    if (!reply) throw Error(Errc::Unavailable, "embedder at " + endpoint_.origin + endpoint_.path_prefix + " failed");
    return parse_embed_response(*reply, items.size());
}

HttpNerClient::HttpNerClient(const std::string& base_url, HttpOptions options)
    : endpoint_(parse_endpoint(base_url)), options_(options) {}

std::optional<std::vector<NerSpan>> HttpNerClient::recognize(const std::string& text) {
    auto reply = post_json(endpoint_, "/v1/ner", json{{"text", text}}, options_);
    if (!reply || !reply->contains("spans") || !(*reply)["spans"].is_array()) return std::nullopt;
    std::vector<NerSpan> spans;
    for (const auto& s : (*reply)["spans"]) {
        NerSpan span;
        span.start = s.value("start", std::size_t{0});
        span.end = s.value("end", std::size_t{0});
        span.label = s.value("label", std::string{});
        if (span.end > text.size() || span.start >= span.end) continue;
        spans.push_back(std::move(span));
    }
    return spans;
}

}  // namespace totr::clients
