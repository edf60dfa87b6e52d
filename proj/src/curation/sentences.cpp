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

#include <array>
#include <unordered_set>

#include "totr/core/text.hpp"
#include "totr/curation.hpp"

namespace totr::curation {
namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

const std::unordered_set<std::string>& personal_pronouns() {
    static const std::unordered_set<std::string> words{"i",  "me",  "my",   "mine", "myself", "we",    "us",
                                                       "our", "ours", "you", "your", "yours",  "yourself"};
    return words;
}

const std::unordered_set<std::string>& irregular_past() {
    static const std::unordered_set<std::string> words{
        "was",  "were", "had",  "did",  "saw",  "went",  "came", "got",   "thought", "heard", "told",
        "said", "found", "made", "took", "knew", "seen", "ago",  "began", "grew",    "left",  "felt",
        "read", "wrote", "sang", "ran",  "sat",  "kept", "lost", "met",   "brought", "bought", "caught"};
    return words;
}

bool is_past_cue(const std::string& w) {
    if (irregular_past().contains(w)) return true;
    return w.size() >= 4 && w.compare(w.size() - 2, 2, "ed") == 0;
}

std::string tag_prompt(std::string_view sentence) {
    std::string p =
        "Classify the following sentence, taken from a post where someone describes content they are trying to "
        "remember, as exactly one of: content-semantic (plot or meaning of the content), content-non-semantic "
        "(visual elements, setting, release time, people appearing), episodic (the writer's own circumstances when "
        "they encountered it), other. Answer strictly in JSON: {\"label\": \"<class>\"}.\nSentence: ";
    p += sentence;
    return p;
}

std::optional<SentenceTag> parse_tag_reply(std::string_view reply) {
    if (auto start = reply.find('{'); start != std::string_view::npos) {
        if (auto end = reply.rfind('}'); end != std::string_view::npos && end > start) {
            json obj = json::parse(reply.substr(start, end - start + 1), nullptr, false);
            if (!obj.is_discarded() && obj.is_object() && obj.contains("label") && obj["label"].is_string()) {
                return sentence_tag_from_string(obj["label"].get<std::string>());
            }
        }
    }
    return sentence_tag_from_string(text::trim(reply));
}

}  // namespace

std::string_view to_string(SentenceTag t) noexcept {
    switch (t) {
        case SentenceTag::ContentSemantic: return "ContentSemantic";
        case SentenceTag::ContentNonSemantic: return "ContentNonSemantic";
        case SentenceTag::Episodic: return "Episodic";
        case SentenceTag::Other: return "Other";
    }
    return "Other";
}

std::optional<SentenceTag> sentence_tag_from_string(std::string_view s) {
    std::string key;
    for (char c : s) {
        if (text::is_ascii_alnum(c)) key.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
    if (key == "contentsemantic" || key == "semantic") return SentenceTag::ContentSemantic;
    if (key == "contentnonsemantic" || key == "nonsemantic") return SentenceTag::ContentNonSemantic;
    if (key == "episodic") return SentenceTag::Episodic;
    if (key == "other") return SentenceTag::Other;
    return std::nullopt;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    auto flush = [&](std::size_t b, std::size_t e) {
        auto piece = text::trim(text.substr(b, e - b));
        if (!piece.empty()) out.emplace_back(piece);
    };
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            flush(begin, i);
            begin = i + 1;
        } else if (is_terminal(text[i]) && i + 1 < text.size() && text::is_space(text[i + 1])) {
            flush(begin, i + 1);
            begin = i + 1;
        }
    }
    if (begin < text.size()) flush(begin, text.size());
    return out;
}

SentenceTag heuristic_tag(std::string_view sentence) {
    bool pronoun = false;
    bool past = false;
    for (const auto& w : text::split_words(sentence)) {
        const std::string lower = text::to_lower(w);
        pronoun = pronoun || personal_pronouns().contains(lower);
        past = past || is_past_cue(lower);
    }
    return (pronoun && past) ? SentenceTag::Episodic : SentenceTag::ContentNonSemantic;
}

std::vector<TaggedSentence> tag_sentences(std::string_view recall_text, clients::JudgeClient* tagger) {
    std::vector<TaggedSentence> out;
    for (auto& s : split_sentences(recall_text)) {
        std::optional<SentenceTag> tag;
        if (tagger) {
            if (auto reply = tagger->complete({tag_prompt(s), {}})) tag = parse_tag_reply(*reply);
        }
        SentenceTag resolved = tag.value_or(heuristic_tag(s));
        out.push_back({std::move(s), resolved});
    }
    return out;
}

std::string strip_episodic(std::span<const TaggedSentence> sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (s.tag == SentenceTag::Episodic) continue;
        if (!out.empty()) out.push_back(' ');
        out += s.text;
    }
    return out;
}

}  // namespace totr::curation
