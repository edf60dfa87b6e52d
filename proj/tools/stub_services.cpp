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

// Local stand-ins for the embedder, judge and NER services, for trying the
// CLI without real models.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "stubs.hpp"
#include "totr/curation.hpp"
#include "totr/video.hpp"

namespace {
std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic embedder/judge/NER stubs"};
    std::string host = "127.0.0.1";
    int port = 8900;
    std::size_t dim = 64;
    app.add_option("--host", host);
    app.add_option("--port", port);
    app.add_option("--dim", dim, "embedding dimension");
    CLI11_PARSE(app, argc, argv);

    totr::testing::StubServer::Options options;
    options.embed_dim = dim;
    // judge: always answers "option 1" for ranking prompts, otherwise an empty verdict
    options.judge = [](const totr::clients::JudgeRequest& r) -> std::optional<std::string> {
        if (r.prompt.find("Option 1:") != std::string::npos) return R"({"answer": "Option 1"})";
        return R"({"content name": "", "category": "not applicable"})";
    };
    options.ner = [](const std::string& text) -> std::optional<std::vector<totr::clients::NerSpan>> {
        return totr::testing::spans_for(text, totr::video::heuristic_proper_nouns(text));
    };
    totr::testing::StubServer server(std::move(options));
    const int bound = server.start(host, port);
    std::cout << "stub services on http://" << host << ":" << bound << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}
