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

#include <regex>
#include <thread>

#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/textgen_metrics.hpp"
#include "totr/video.hpp"

namespace totr::textgen {

using nlohmann::json;

const std::string_view kPrrInstruction =
    "You will be given multiple images, which are scenes from a video. The images are about some brand, depicting a "
    "brand advertisement. There are also several potential descriptions available for the sequence of images, which "
    "highlight what is most memorable from the video. Your task is, given 5 candidate descriptions for the images "
    "potential descriptions available for the sequence of images, choose the description which is the most fitting. "
    "You are required to answer strictly in a JSON format, providing the final answer as follows: "
    "{\"answer\": <Option n>}";

PrrInstance prr_from_json(const json& j) {
    PrrInstance p;
    p.video_id = jsonl::require_string(j, "video_id");
    if (!j.contains("candidate_prompts") || !j["candidate_prompts"].is_array()) {
        throw Error(Errc::Malformed, "candidate_prompts must be an array");
    }
    const auto& c = j["candidate_prompts"];
    if (c.size() != kPrrCandidates) throw Error(Errc::Malformed, "PRR instance needs exactly 5 candidates");
    for (std::size_t i = 0; i < kPrrCandidates; ++i) {
        if (!c[i].is_string()) throw Error(Errc::Malformed, "candidate prompts must be strings");
        p.candidate_prompts[i] = c[i].get<std::string>();
    }
    const auto gold = jsonl::optional_integer(j, "gold_index");
    if (!gold || *gold < 0 || *gold >= static_cast<long long>(kPrrCandidates)) {
        throw Error(Errc::Malformed, "gold_index must be in 0..4");
    }
    p.gold_index = static_cast<std::size_t>(*gold);
    return p;
}

json to_json(const PrrInstance& p) {
    return {{"video_id", p.video_id}, {"candidate_prompts", p.candidate_prompts}, {"gold_index", p.gold_index}};
}

std::string prr_prompt(const PrrInstance& instance) {
    std::string out(kPrrInstruction);
    out += "\n\n";
    for (std::size_t i = 0; i < kPrrCandidates; ++i) {
        out += "Option " + std::to_string(i + 1) + ": " + instance.candidate_prompts[i] + "\n";
    }
    return out;
}

std::optional<std::size_t> parse_prr_answer(std::string_view reply) {
    // the documented format is not valid JSON ({"answer": <Option 3>}), so
    // match the value loosely instead of parsing
    static const std::regex re(R"re("?answer"?\s*:\s*"?\s*<?\s*(?:option\s*)?([0-9]+)\s*>?)re", std::regex::icase);
    std::cmatch m;
    const std::string s(reply);
    std::string digits;
    if (std::regex_search(s.c_str(), m, re)) {
        digits = m[1].str();
    } else {
        static const std::regex bare(R"re(^\s*"?\s*(?:option\s*)?([0-9]+)\s*"?\s*$)re", std::regex::icase);
        if (!std::regex_search(s.c_str(), m, bare)) return std::nullopt;
        digits = m[1].str();
    }
    if (digits.size() > 2) return std::nullopt;
    const int n = std::stoi(digits);
    if (n < 1 || n > static_cast<int>(kPrrCandidates)) return std::nullopt;
    return static_cast<std::size_t>(n - 1);
}

PrrReport prr_run(std::span<const PrrInstance> instances, const std::filesystem::path& assets_root,
                  clients::JudgeClient& judge, const PrrOptions& options) {
    PrrReport report;
    auto last_call = std::chrono::steady_clock::time_point{};
    for (const auto& inst : instances) {
        const auto dir = assets_root / inst.video_id;
        if (!std::filesystem::is_directory(dir)) {
            throw Error(Errc::NotFound, "no asset directory for " + inst.video_id + " under " + assets_root.string());
        }
        const video::VideoAsset asset = video::load_asset(dir);
        clients::JudgeRequest req;
        req.prompt = prr_prompt(inst);
        if (!asset.deduped_scene_indices.empty()) {
            for (int idx : asset.deduped_scene_indices) {
                for (const auto& sc : asset.scenes) {
                    if (sc.index == idx) req.image_paths.push_back((dir / sc.image_path).string());
                }
            }
        } else {
            for (const auto& sc : asset.scenes) req.image_paths.push_back((dir / sc.image_path).string());
        }

        PrrOutcome out;
        out.video_id = inst.video_id;
        out.gold_index = inst.gold_index;
        for (int attempt = 0; attempt <= options.retries && !out.predicted; ++attempt) {
            if (options.min_interval.count() > 0) {
                const auto wake = last_call + options.min_interval;
                if (std::chrono::steady_clock::now() < wake) std::this_thread::sleep_until(wake);
                last_call = std::chrono::steady_clock::now();
            }
            ++out.attempts;
            if (auto reply = judge.complete(req)) out.predicted = parse_prr_answer(*reply);
        }
        out.correct = out.predicted && *out.predicted == inst.gold_index;
        if (!out.predicted) ++report.unparseable;
        if (out.correct) ++report.correct;
        report.outcomes.push_back(std::move(out));
    }
    report.n = instances.size();
    report.accuracy = report.n ? static_cast<double>(report.correct) / static_cast<double>(report.n) : 0.0;
    return report;
}

json to_json(const PrrReport& r) {
    json outcomes = json::array();
    for (const auto& o : r.outcomes) {
        outcomes.push_back({{"video_id", o.video_id},
                            {"predicted", o.predicted ? json(*o.predicted) : json(nullptr)},
                            {"gold_index", o.gold_index},
                            {"correct", o.correct},
                            {"attempts", o.attempts}});
    }
    return {{"accuracy", r.accuracy},
            {"n", r.n},
            {"correct", r.correct},
            {"unparseable", r.unparseable},
            {"outcomes", std::move(outcomes)}};
}

}  // namespace totr::textgen
