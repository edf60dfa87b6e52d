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

#include "doctest.h"
#include "stubs.hpp"
#include "totr/clients.hpp"
#include "totr/core/errors.hpp"

using namespace totr;
using namespace totr::clients;
using nlohmann::json;

TEST_CASE("parse_endpoint") {
    auto a = parse_endpoint("http://localhost:9000");
    CHECK(a.origin == "http://localhost:9000");
    CHECK(a.path_prefix.empty());
    auto b = parse_endpoint("http://h:1/api/v2/");
    CHECK(b.origin == "http://h:1");
    CHECK(b.path_prefix == "/api/v2");
    CHECK_THROWS_AS(parse_endpoint("localhost:9000"), Error);
}

TEST_CASE("embed reply validation") {
    CHECK(parse_embed_response(json{{"dim", 2}, {"vectors", {{1, 2}, {3, 4}}}}, 2).vectors.size() == 2);
    auto code_of = [](const json& reply, std::size_t rows) {
        try {
            parse_embed_response(reply, rows);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::Io;  // sentinel: no throw
    };
    CHECK(code_of(json{{"vectors", json::array()}}, 0) == Errc::Malformed);
    CHECK(code_of(json{{"dim", 2}, {"vectors", {{1, 2, 3}}}}, 1) == Errc::DimMismatch);
    CHECK(code_of(json{{"dim", 2}, {"vectors", {{1, 2}}}}, 2) == Errc::Malformed);
}

TEST_CASE("embed request body") {
    std::vector<EmbedItem> items{{"hi", {"a.jpg"}}};
    auto body = embed_request_json(std::nullopt, items);
    CHECK(body["instruction"].is_null());
    CHECK(body["items"][0]["text"] == "hi");
    CHECK(body["items"][0]["image_paths"][0] == "a.jpg");
    CHECK(embed_request_json(std::string("x"), items)["instruction"] == "x");
}

TEST_CASE("http clients round trip through the stub server") {
    testing::StubServer::Options opt;
    opt.embed_dim = 16;
    opt.judge = [](const JudgeRequest& r) -> std::optional<std::string> {
        return "echo:" + r.prompt + ":" + std::to_string(r.image_paths.size());
    };
    opt.ner = [](const std::string& t) -> std::optional<std::vector<NerSpan>> {
        return testing::spans_for(t, {"Alice"});
    };
    testing::StubServer server(opt);
    server.start();

    HttpEmbedderClient emb(server.url());
    std::vector<EmbedItem> items{{"red car", {}}, {"blue boat", {}}};
    auto r = emb.embed(std::nullopt, items);
    CHECK(r.dim == 16);
    REQUIRE(r.vectors.size() == 2);
    CHECK(r.vectors[0] == testing::HashEmbedder::vector_for("red car", 16));

    HttpJudgeClient judge(server.url());
    CHECK(judge.complete({"p", {"x.jpg", "y.jpg"}}) == std::optional<std::string>("echo:p:2"));

    HttpNerClient ner(server.url());
    auto spans = ner.recognize("ask Alice and Alice");
    REQUIRE(spans.has_value());
    REQUIRE(spans->size() == 2);
    CHECK((*spans)[0].start == 4);
    CHECK((*spans)[0].end == 9);
    CHECK((*spans)[1].label == "PERSON");
}

TEST_CASE("transient 5xx is retried; persistent failure surfaces") {
    testing::StubServer::Options opt;
    opt.fail_first = 2;
    testing::StubServer server(opt);
    server.start();
    HttpOptions ho;
    ho.retries = 2;
    HttpEmbedderClient emb(server.url(), ho);
    std::vector<EmbedItem> items{{"x", {}}};
    CHECK(emb.embed(std::nullopt, items).vectors.size() == 1);
    CHECK(server.requests() == 3);

    testing::StubServer::Options bad;
    bad.fail_first = 100;
    testing::StubServer down(bad);
    down.start();
    HttpOptions none;
    none.retries = 0;
    HttpEmbedderClient emb2(down.url(), none);
    try {
        emb2.embed(std::nullopt, items);
        FAIL("expected Unavailable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Unavailable);
    }
    HttpJudgeClient judge(down.url(), none);
    CHECK_FALSE(judge.complete({"p", {}}).has_value());
    HttpNerClient ner(down.url(), none);
    CHECK_FALSE(ner.recognize("x").has_value());
}
