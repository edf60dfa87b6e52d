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

#include "totr/core/text.hpp"
#include "totr/curation.hpp"

namespace totr::curation {
namespace {

// Index one past the brace closing the object that opens at `start`, or npos.
std::size_t match_object(std::string_view s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

std::vector<std::string> string_list(const json& v) {
    std::vector<std::string> out;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (e.is_string()) out.push_back(std::string(text::trim(e.get<std::string>())));
        }
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        std::size_t b = 0;
        while (b <= s.size()) {
            std::size_t e = s.find(',', b);
            if (e == std::string::npos) e = s.size();
            auto piece = text::trim(std::string_view(s).substr(b, e - b));
            if (!piece.empty()) out.emplace_back(piece);
            b = e + 1;
        }
    }
    return out;
}

std::string string_field(const json& obj, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = obj.find(k);
        if (it != obj.end() && it->is_string()) return std::string(text::trim(it->get<std::string>()));
    }
    return {};
}

std::string canonical_link(std::string_view url) {
    std::string out = text::to_lower(url);
    while (!out.empty() && out.back() == '/') out.pop_back();
    for (std::string_view prefix : {"https://www.", "http://www.", "https://", "http://"}) {
        if (out.rfind(prefix, 0) == 0) {
            out.erase(0, prefix.size());
            break;
        }
    }
    return out;
}

bool same_link(std::string_view a, std::string_view b) {
    if (canonical_link(a) == canonical_link(b)) return true;
    auto ya = youtube_video_id(a);
    auto yb = youtube_video_id(b);
    return ya && yb && *ya == *yb;
}

std::string answer_for_prompt(const SolvedResolution& r) {
    if (!r.answer_text.empty()) return r.answer_text;
    std::string joined;
    for (const auto& l : r.answer_links) {
        if (!joined.empty()) joined += '\n';
        joined += l;
    }
    return joined;
}

}  // namespace

const std::string_view kJudgePromptTemplate =
    "You will be given an online post, where a user asks about some content that they are trying to remember, "
    "but can only provide currently a vague description of, from their memory. You will also be provided with the "
    "response that is given to the user, which contains the name, or link of the correct content item that the user "
    "is trying to find about. Your task is, given this conversation, to respond clearly with the name (or link) and "
    "type of the content item that the user is asking about. You are required to answer strictly in a JSON format, "
    "as follows: {\"content name\": \"name of the content item and the link to it, if present\", \"category\": "
    "\"could be movie, book, youtube video, game, song, quote, or anything\", \"genre\": \"could be anything among "
    "comedy, drama, horror, fantasy, adventure, or not applicable\", \"objects\": \"standard object categories\", "
    "\"emotions\": \"any common emotions that maybe present\"}. Answer strictly in the JSON format, with the correct "
    "content item name, and category for the following user post and reply: ";

json to_json(const JudgeVerdict& v) {
    return json{{"content_name", v.content_name}, {"category", v.category},   {"genre", v.genre},
                {"objects", v.objects},           {"emotions", v.emotions},   {"agrees_with_rule", v.agrees_with_rule}};
}

std::string judge_prompt(const RawPost& post, std::string_view answer) {
    std::string prompt(kJudgePromptTemplate);
    prompt += "\n\n";
    prompt += recall_text_of(post);
    prompt += "\n\n";
    prompt += answer;
    return prompt;
}

std::optional<JudgeVerdict> parse_judge_reply(std::string_view reply) {
    for (std::size_t start = reply.find('{'); start != std::string_view::npos; start = reply.find('{', start + 1)) {
        const std::size_t end = match_object(reply, start);
        if (end == std::string_view::npos) continue;
        json obj = json::parse(reply.substr(start, end - start), nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) continue;
        JudgeVerdict v;
        v.content_name = string_field(obj, {"content name", "content_name", "name"});
        if (v.content_name.empty()) continue;
        v.category = string_field(obj, {"category"});
        v.genre = string_field(obj, {"genre"});
        if (obj.contains("objects")) v.objects = string_list(obj["objects"]);
        if (obj.contains("emotions")) v.emotions = string_list(obj["emotions"]);
        return v;
    }
    return std::nullopt;
}

bool answers_agree(std::string_view content_name, const SolvedResolution& resolution) {
    for (const auto& link : extract_links(content_name)) {
        for (const auto& rule_link : resolution.answer_links) {
            if (same_link(link, rule_link)) return true;
        }
    }
    const std::string name = text::normalize_for_match(content_name);
    const std::string answer = text::normalize_for_match(resolution.answer_text);
    if (name.empty() || answer.empty()) return false;
    return answer.find(name) != std::string::npos || name.find(answer) != std::string::npos;
}

std::optional<JudgeVerdict> judge_validate(const RawPost& post, std::span<const RawComment> /*comments*/,
                                           const SolvedResolution& resolution, clients::JudgeClient& judge) {
    const clients::JudgeRequest request{judge_prompt(post, answer_for_prompt(resolution)), {}};
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto reply = judge.complete(request);
        if (!reply) return std::nullopt;
        if (auto verdict = parse_judge_reply(*reply)) {
            verdict->agrees_with_rule = answers_agree(verdict->content_name, resolution);
            return verdict;
        }
    }
    return std::nullopt;
}

}  // namespace totr::curation
