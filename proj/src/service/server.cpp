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

#include <spdlog/spdlog.h>

#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/service.hpp"

namespace totr::service {

using nlohmann::json;

struct Server::Impl {
    SearchEngine& engine;
    httplib::Server http;
    std::thread thread;

    explicit Impl(SearchEngine& e) : engine(e) {}
};

namespace {

int status_for(Errc c) {
    switch (c) {
        case Errc::InvalidArgument:
        case Errc::Malformed:
        case Errc::DimMismatch: return 400;
        case Errc::NotFound: return 404;
        case Errc::Unavailable: return 503;
        default: return 500;
    }
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <class Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        reply(res, status_for(e.code()), {{"error", e.what()}, {"code", std::string(to_string(e.code()))}});
    } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("bad JSON: ") + e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

}  // namespace

Server::Server(SearchEngine& engine) : impl_(std::make_unique<Impl>(engine)) {
    auto& http = impl_->http;
    SearchEngine& eng = engine;

    http.Post("/v1/search", [&eng](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto request = search_request_from_json(json::parse(req.body));
            reply(res, 200, to_json(eng.search(request)));
        });
    });
    http.Get(R"(/v1/assets/([^/]+))", [&eng](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto a = eng.asset(req.matches[1].str());
            if (!a) throw Error(Errc::NotFound, "unknown video '" + req.matches[1].str() + "'");
            reply(res, 200, *a);
        });
    });
    http.Get("/v1/health", [&eng](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, eng.health()); });
    });
    http.Post("/v1/feedback", [&eng](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = json::parse(req.body);
            if (!body.is_object()) throw Error(Errc::InvalidArgument, "feedback body must be a JSON object");
            eng.feedback(jsonl::require_string(body, "query_id"), jsonl::require_string(body, "chosen_video_id"));
            reply(res, 200, {{"ok", true}});
        });
    });
    const auto& media = engine.config().media_root;
    if (!media.empty()) {
        if (!http.set_mount_point("/media", media.string())) {
            spdlog::warn("media root {} is not a directory; /media/ disabled", media.string());
        }
    }
}

Server::~Server() { stop(); }

int Server::start() {
    const auto& cfg = impl_->engine.config();
    auto& http = impl_->http;
    if (cfg.port == 0) {
        port_ = http.bind_to_any_port(cfg.host);
    } else {
        port_ = http.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
    }
    if (port_ < 0) throw Error(Errc::Io, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
    impl_->thread = std::thread([&http] { http.listen_after_bind(); });
    http.wait_until_ready();
    return port_;
}

void Server::stop() {
    if (!impl_) return;
    impl_->http.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void Server::wait() {
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace totr::service
