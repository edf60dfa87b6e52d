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

#include <algorithm>
#include <unordered_map>

#include "totr/core/errors.hpp"
#include "totr/core/text.hpp"
#include "totr/curation.hpp"

namespace totr::curation {
namespace {

// A signal that points at an answer: either a concrete comment, a set of
// links, or both.
struct Claim {
    Evidence source;
    std::optional<std::string> comment_id;
    std::vector<std::string> links;
    std::int64_t at = 0;
};

bool links_intersect(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    }
    return false;
}

bool consistent(const Claim& a, const Claim& b) {
    if (a.comment_id && b.comment_id && *a.comment_id == *b.comment_id) return true;
    return links_intersect(a.links, b.links);
}

bool all_consistent(const std::vector<const Claim*>& claims) {
    for (std::size_t i = 0; i < claims.size(); ++i) {
        for (std::size_t j = i + 1; j < claims.size(); ++j) {
            if (!consistent(*claims[i], *claims[j])) return false;
        }
    }
    return true;
}

std::string fold_apostrophes(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        // U+2019 RIGHT SINGLE QUOTATION MARK
        if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 && static_cast<unsigned char>(s[i + 1]) == 0x80 &&
            static_cast<unsigned char>(s[i + 2]) == 0x99) {
            out.push_back('\'');
            i += 2;
            continue;
        }
        char c = s[i];
        out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
    return out;
}

const RawComment* find_bot_target(const RawComment& bot, const std::vector<const RawComment*>& ordered,
                                  const RawPost& post, const std::vector<std::string>& bot_links) {
    const std::string bot_norm = text::normalize_for_match(bot.body);
    for (const RawComment* c : ordered) {
        if (c == &bot || is_moderator_bot(*c) || c->author == post.author) continue;
        if (!bot_links.empty() && links_intersect(extract_links(c->body), bot_links)) return c;
    }
    for (const RawComment* c : ordered) {
        if (c == &bot || is_moderator_bot(*c) || c->author == post.author) continue;
        const std::string norm = text::normalize_for_match(c->body);
        if (norm.size() >= 4 && bot_norm.find(norm) != std::string::npos) return c;
    }
    return nullptr;
}

}  // namespace

std::string_view to_string(SolvedStatus s) noexcept {
    switch (s) {
        case SolvedStatus::Solved: return "Solved";
        case SolvedStatus::Unsolved: return "Unsolved";
        case SolvedStatus::Conflict: return "Conflict";
    }
    return "Unsolved";
}

std::string_view to_string(Evidence e) noexcept {
    switch (e) {
        case Evidence::FlairTag: return "FlairTag";
        case Evidence::OpReply: return "OpReply";
        case Evidence::ModBotConfirm: return "ModBotConfirm";
        case Evidence::JudgeConfirm: return "JudgeConfirm";
    }
    return "FlairTag";
}

SolvedStatus status_from_string(std::string_view s) {
    if (s == "Solved") return SolvedStatus::Solved;
    if (s == "Unsolved") return SolvedStatus::Unsolved;
    if (s == "Conflict") return SolvedStatus::Conflict;
    throw Error(Errc::Malformed, "unknown status " + std::string(s));
}

json to_json(const SolvedResolution& r) {
    json j;
    j["post_id"] = r.post_id;
    j["status"] = std::string(to_string(r.status));
    j["answer_text"] = r.answer_text;
    j["answer_links"] = r.answer_links;
    json ev = json::array();
    for (auto e : r.evidence) ev.push_back(std::string(to_string(e)));
    j["evidence"] = std::move(ev);
    j["solving_comment_id"] = r.solving_comment_id ? json(*r.solving_comment_id) : json(nullptr);
    j["solved_at"] = r.solved_at ? json(*r.solved_at) : json(nullptr);
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

bool is_moderator_bot(const RawComment& c) {
    if (c.is_moderator_bot) return *c.is_moderator_bot;
    const std::string lower = text::to_lower(c.author);
    return lower.size() >= 3 && lower.compare(lower.size() - 3, 3, "bot") == 0;
}

bool flair_marks_solved(std::string_view flair) {
    for (const auto& token : text::split_words(flair)) {
        if (text::to_lower(token) == "solved") return true;
    }
    return false;
}

bool contains_confirmation(std::string_view body, std::span<const std::string> phrases) {
    const std::string hay = fold_apostrophes(body);
    for (const auto& phrase_raw : phrases) {
        const std::string phrase = fold_apostrophes(phrase_raw);
        if (phrase.empty()) continue;
        const bool check_after = text::is_word_byte(phrase.back());
        const bool check_before = text::is_word_byte(phrase.front());
        for (auto pos = hay.find(phrase); pos != std::string::npos; pos = hay.find(phrase, pos + 1)) {
            if (check_before && pos > 0 && text::is_word_byte(hay[pos - 1])) continue;
            const std::size_t end = pos + phrase.size();
            if (check_after && end < hay.size() && text::is_word_byte(hay[end])) continue;
            return true;
        }
    }
    return false;
}

SolvedResolution resolve_solved(const RawPost& post, std::span<const RawComment> comments,
                                const ResolveOptions& options) {
    SolvedResolution res;
    res.post_id = post.post_id;
    const bool flair = post.flair_css && flair_marks_solved(*post.flair_css);

    std::vector<const RawComment*> ordered;
    ordered.reserve(comments.size());
    for (const auto& c : comments) {
        if (c.post_id == post.post_id) ordered.push_back(&c);
    }
    std::sort(ordered.begin(), ordered.end(), [](const RawComment* a, const RawComment* b) {
        if (a->created_at != b->created_at) return a->created_at < b->created_at;
        return a->comment_id < b->comment_id;
    });
    std::unordered_map<std::string_view, const RawComment*> by_id;
    for (const RawComment* c : ordered) by_id.emplace(c->comment_id, c);

    std::vector<Claim> claims;
    for (const RawComment* c : ordered) {
        if (c->author == post.author && c->parent_id && contains_confirmation(c->body, options.confirm_phrases)) {
            auto it = by_id.find(*c->parent_id);
            if (it != by_id.end() && it->second->author != post.author && !is_moderator_bot(*it->second)) {
                const RawComment* parent = it->second;
                claims.push_back({Evidence::OpReply, parent->comment_id, extract_links(parent->body), parent->created_at});
            }
        }
        if (is_moderator_bot(*c) && c->author != post.author) {
            auto bot_links = extract_links(c->body);
            if (const RawComment* target = find_bot_target(*c, ordered, post, bot_links)) {
                claims.push_back({Evidence::ModBotConfirm, target->comment_id, extract_links(target->body), target->created_at});
            } else if (!bot_links.empty()) {
                claims.push_back({Evidence::ModBotConfirm, std::nullopt, std::move(bot_links), c->created_at});
            }
        }
    }

    if (claims.empty()) {
        if (flair) res.warnings.push_back("flair marks solved but no solving comment is identifiable");
        return res;
    }

    std::vector<const Claim*> chosen;
    for (const auto& c : claims) chosen.push_back(&c);
    if (!all_consistent(chosen)) {
        std::vector<const Claim*> op_only;
        for (const auto& c : claims) {
            if (c.source == Evidence::OpReply) op_only.push_back(&c);
        }
        if (options.prefer_op_reply && !op_only.empty() && all_consistent(op_only)) {
            chosen = std::move(op_only);
            res.warnings.push_back("conflicting signals; original poster's confirmation preferred");
        } else {
            res.status = SolvedStatus::Conflict;
            if (flair) res.evidence.insert(Evidence::FlairTag);
            for (const auto& c : claims) res.evidence.insert(c.source);
            return res;
        }
    }

    // OP confirmation names the answer most directly, then the bot.
    const Claim* primary = nullptr;
    for (Evidence pref : {Evidence::OpReply, Evidence::ModBotConfirm}) {
        for (const Claim* c : chosen) {
            if (c->source == pref && c->comment_id) {
                primary = c;
                break;
            }
        }
        if (primary) break;
    }
    if (!primary) primary = chosen.front();

    res.status = SolvedStatus::Solved;
    if (flair) res.evidence.insert(Evidence::FlairTag);
    for (const Claim* c : chosen) res.evidence.insert(c->source);
    if (primary->comment_id) {
        const RawComment* solving = by_id.at(*primary->comment_id);
        res.solving_comment_id = solving->comment_id;
        res.answer_text = solving->body;
        res.answer_links = extract_links(solving->body);
        res.solved_at = solving->created_at;
    } else {
        res.answer_links = primary->links;
        res.solved_at = primary->at;
    }
    if (res.answer_text.empty() && res.answer_links.empty()) {
        // An empty solving comment names nothing.
        SolvedResolution empty;
        empty.post_id = post.post_id;
        empty.warnings.push_back("solving comment is empty");
        return empty;
    }
    return res;
}

}  // namespace totr::curation
