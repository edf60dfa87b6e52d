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

#include "pipeline.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <map>
#include <thread>

#include "httplib.h"
#include "stubs.hpp"
#include "totr/cli.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/embedding.hpp"

namespace totr::testing {

using nlohmann::json;

namespace {

// Plain socket on purpose: an httplib::Server that binds but never listens
// keeps its SO_REUSEPORT socket open, and the kernel then hands some of the
// real server's connections to it.
int free_port() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return -1;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    socklen_t len = sizeof addr;
    int port = -1;
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0 &&
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
        port = ntohs(addr.sin_port);
    }
    ::close(fd);
    return port;
}

}  // namespace

PipelineOutcome run_fixture_pipeline(const std::filesystem::path& data, const std::filesystem::path& work) {
    PipelineOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };
    const auto p = [&](const char* name) { return (work / name).string(); };

    StubServer::Options opt;
    opt.embed_dim = 64;
    opt.ner = [](const std::string&) -> std::optional<std::vector<clients::NerSpan>> { return std::vector<clients::NerSpan>{}; };
    StubServer stub(opt);
    stub.start();
    const auto url = stub.url();
    const auto records = (work / "curated/records.jsonl").string();

    const std::vector<std::pair<std::string, std::vector<std::string>>> steps{
        {"curate",
         {"curate", "--posts", (data / "posts.jsonl").string(), "--comments", (data / "comments.jsonl").string(), "--out",
          p("curated"), "--workers", "2"}},
        {"assets",
         {"assets", "--root", (data / "assets").string(), "--out", p("assets_index.jsonl"), "--mask", "--ner-url", url,
          "--report", p("assets_report.json")}},
        {"embed records", {"embed", "--in", records, "--out", p("recalls.t2me"), "--embedder-url", url}},
        {"embed videos",
         {"embed", "--in", p("assets_index.jsonl"), "--out", p("videos.t2me"), "--embedder-url", url, "--batch-size", "8"}},
        {"mine",
         {"--seed", "7", "mine", "--corpus", p("recalls.t2me"), "--out", p("negatives.jsonl"), "--pool", "10", "--records",
          records, "--videos", p("videos.t2me"), "--pairs-out", p("pairs.jsonl")}},
        {"train",
         {"train", "--pairs", p("pairs.jsonl"), "--queries", p("videos.t2me"), "--docs", p("recalls.t2me"), "--out",
          p("adapter.json"), "--epochs", "3", "--batch", "16", "--lr", "0.05", "--seed", "7", "--trace", p("trace.json")}},
    };
    for (const auto& [name, args] : steps) {
        if (cli::run(args) != 0) {
            out.failed_step = name;
            return finish();
        }
    }
    out.records = jsonl::read_file(records).size();
    out.videos = embedding::load_store(work / "videos.t2me").rows();
    out.pairs = jsonl::read_file(work / "pairs.jsonl").size();

    json cfg{{"name", "VideoDocuments"},
             {"query_source", records},
             {"doc_source", p("videos.t2me")},
             {"adapter", p("adapter.json")},
             {"instruction", std::string(embedding::kRetrievalInstruction)},
             {"embedder_url", url},
             {"k_values", {1, 3, 10, 100}},
             {"seed", 7}};
    jsonl::write_json_file(work / "eval.json", cfg);
    if (cli::run({"eval", "--config", p("eval.json"), "--out", p("result.json"), "--workers", "2"}) != 0) {
        out.failed_step = "eval";
        return finish();
    }
    const auto result = jsonl::read_json_file(work / "result.json");
    out.eval_queries = result["n_queries"].get<std::size_t>();
    std::map<std::string, std::vector<std::string>> offline;
    for (const auto& q : result["per_query"]) offline[q["query_id"]] = q["top_ids"].get<std::vector<std::string>>();
    std::map<std::string, std::string> text_of;
    for (const auto& r : jsonl::read_file(records)) text_of[r["record_id"]] = r["recall_text"];

    const int port = free_port();
    int serve_rc = -1;
    std::thread serving([&] {
        serve_rc = cli::run({"serve", "--index", p("videos.t2me"), "--assets-index", p("assets_index.jsonl"),
                             "--media-root", (data / "assets").string(), "--adapter", p("adapter.json"),
                             "--embedder-url", url, "--feedback-log", p("feedback.jsonl"), "--port",
                             std::to_string(port)});
    });
    httplib::Client client("127.0.0.1", port);
    bool up = false;
    for (int i = 0; i < 200 && !up; ++i) {
        auto h = client.Get("/v1/health");
        up = h && h->status == 200;
        if (!up) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    if (up) {
        for (const auto& g : jsonl::read_file(data / "golden_queries.jsonl")) {
            const auto id = g["record_id"].get<std::string>();
            ++out.golden;
            auto text = text_of.find(id);
            auto want_it = offline.find(id);
            if (text == text_of.end() || want_it == offline.end()) {
                out.mismatches.push_back(id);
                continue;
            }
            auto res = client.Post("/v1/search", json{{"query_text", text->second}, {"k", 3}}.dump(), "application/json");
            std::vector<std::string> online;
            if (res && res->status == 200) {
                const auto body = json::parse(res->body);
                for (const auto& r : body.at("results")) online.push_back(r.at("video_id"));
            }
            const auto& want = want_it->second;
            const std::vector<std::string> top3(want.begin(), want.begin() + std::min<std::size_t>(3, want.size()));
            if (online == top3) {
                ++out.golden_matched;
            } else {
                std::string why = id + ": service [";
                for (const auto& x : online) why += x + " ";
                why += "] eval [";
                for (const auto& x : top3) why += x + " ";
                if (res && res->status != 200) why += "] http " + std::to_string(res->status) + " " + res->body;
                else if (!res) why += "] " + httplib::to_string(res.error());
                else why += "]";
                out.mismatches.push_back(why);
            }
        }
    }
    cli::request_stop();
    serving.join();
    if (!up) {
        out.failed_step = "serve (never became healthy)";
    } else if (serve_rc != 0) {
        out.failed_step = "serve (exit " + std::to_string(serve_rc) + ")";
    } else {
        out.completed = true;
    }
    return finish();
}

}  // namespace totr::testing
