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
#include <unordered_set>

#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/core/parallel.hpp"
#include "totr/core/text.hpp"
#include "totr/curation.hpp"

namespace totr::curation {

std::string recall_text_of(const RawPost& post) {
    const auto title = text::trim(post.title);
    const auto body = text::trim(post.body);
    if (body.empty()) return std::string(title);
    if (title.empty()) return std::string(body);
    return std::string(title) + "\n" + std::string(body);
}

json to_json(const RecallRecord& r) {
    json j;
    j["record_id"] = r.record_id;
    j["recall_text"] = r.recall_text;
    j["answer_text"] = r.answer_text;
    j["answer_links"] = r.answer_links;
    j["category"] = r.category ? json(*r.category) : json(nullptr);
    j["genre"] = r.genre ? json(*r.genre) : json(nullptr);
    json tags = json::array();
    for (auto t : r.sentence_tags) tags.push_back(std::string(to_string(t)));
    j["sentence_tags"] = std::move(tags);
    j["solved_latency_s"] = r.solved_latency_s ? json(*r.solved_latency_s) : json(nullptr);
    return j;
}

RecallRecord record_from_json(const json& j) {
    RecallRecord r;
    r.record_id = jsonl::require_string(j, "record_id");
    r.recall_text = jsonl::require_string(j, "recall_text");
    r.answer_text = jsonl::optional_string(j, "answer_text").value_or("");
    if (j.contains("answer_links") && j["answer_links"].is_array()) r.answer_links = j["answer_links"].get<std::vector<std::string>>();
    r.category = jsonl::optional_string(j, "category");
    r.genre = jsonl::optional_string(j, "genre");
    if (j.contains("sentence_tags") && j["sentence_tags"].is_array()) {
        for (const auto& t : j["sentence_tags"]) {
            auto tag = sentence_tag_from_string(t.get<std::string>());
            if (!tag) throw Error(Errc::Malformed, "unknown sentence tag");
            r.sentence_tags.push_back(*tag);
        }
    }
    r.solved_latency_s = jsonl::optional_number(j, "solved_latency_s");
    if (r.recall_text.empty()) throw Error(Errc::Malformed, "empty recall_text");
    return r;
}

json to_json(const CorpusStats& s) {
    json j;
    j["total_posts"] = s.total_posts;
    j["malformed_posts"] = s.malformed_posts;
    j["filtered"] = {{"nsfw", s.filtered_nsfw}, {"bot_author", s.filtered_bot_author}, {"deleted", s.filtered_deleted}};
    j["post_filter"] = s.post_filter;
    j["total_comments"] = s.total_comments;
    j["malformed_comments"] = s.malformed_comments;
    j["dangling_comments"] = s.dangling_comments;
    j["solved"] = s.solved;
    j["unsolved"] = s.unsolved;
    j["conflict"] = s.conflict;
    j["flair_without_answer"] = s.flair_without_answer;
    j["judge"] = {{"agree", s.judge_agree}, {"disagree", s.judge_disagree}, {"absent", s.judge_absent}};
    j["dangling_resolutions"] = s.dangling_resolutions;
    j["negative_latency"] = s.negative_latency;
    j["records"] = s.records;
    return j;
}

std::vector<RecallRecord> build_records(std::span<const RawPost> posts, std::span<const SolvedResolution> resolutions,
                                        const std::map<std::string, JudgeVerdict>& verdicts, CorpusStats& stats,
                                        clients::JudgeClient* tagger) {
    std::unordered_map<std::string_view, const RawPost*> by_id;
    for (const auto& p : posts) by_id.emplace(p.post_id, &p);

    std::vector<RecallRecord> records;
    for (const auto& res : resolutions) {
        if (res.status != SolvedStatus::Solved) continue;
        auto it = by_id.find(res.post_id);
        if (it == by_id.end()) {
            ++stats.dangling_resolutions;
            continue;
        }
        const RawPost& post = *it->second;
        RecallRecord r;
        r.record_id = post.post_id;
        r.recall_text = recall_text_of(post);
        if (r.recall_text.empty()) {
            ++stats.dangling_resolutions;
            continue;
        }
        r.answer_text = res.answer_text;
        r.answer_links = res.answer_links;
        if (auto v = verdicts.find(post.post_id); v != verdicts.end()) {
            if (!v->second.category.empty()) r.category = v->second.category;
            if (!v->second.genre.empty()) r.genre = v->second.genre;
        }
        for (const auto& s : tag_sentences(r.recall_text, tagger)) r.sentence_tags.push_back(s.tag);
        if (res.solved_at) {
            const std::int64_t latency = *res.solved_at - post.created_at;
            if (latency >= 0) {
                r.solved_latency_s = static_cast<double>(latency);
            } else {
                ++stats.negative_latency;
            }
        }
        records.push_back(std::move(r));
    }
    std::sort(records.begin(), records.end(),
              [](const RecallRecord& a, const RecallRecord& b) { return a.record_id < b.record_id; });
    stats.records = records.size();
    return records;
}

CurationResult run_curation(const PostArchive& posts, const CommentArchive& comments, const CurationOptions& options) {
    CurationResult out;
    CorpusStats& stats = out.stats;
    stats.total_posts = posts.posts.size() + posts.malformed;
    stats.malformed_posts = posts.malformed;
    stats.total_comments = comments.comments.size() + comments.malformed;
    stats.malformed_comments = comments.malformed;

    FilterReport report;
    report.malformed = posts.malformed;
    std::vector<RawPost> kept = filter_posts(posts.posts, report);
    stats.filtered_nsfw = report.nsfw;
    stats.filtered_bot_author = report.bot_author;
    stats.filtered_deleted = report.deleted;
    stats.post_filter = kept.size();
    std::sort(kept.begin(), kept.end(), [](const RawPost& a, const RawPost& b) { return a.post_id < b.post_id; });

    std::unordered_set<std::string_view> known_posts;
    for (const auto& p : posts.posts) known_posts.insert(p.post_id);
    std::unordered_map<std::string_view, std::string_view> comment_post;
    for (const auto& c : comments.comments) comment_post.emplace(c.comment_id, c.post_id);

    std::unordered_map<std::string_view, std::vector<RawComment>> grouped;
    for (const auto& c : comments.comments) {
        const bool post_ok = known_posts.contains(c.post_id);
        bool parent_ok = true;
        if (c.parent_id) {
            auto it = comment_post.find(*c.parent_id);
            parent_ok = it != comment_post.end() && it->second == c.post_id;
        }
        if (!post_ok || !parent_ok) {
            ++stats.dangling_comments;
            continue;
        }
        grouped[c.post_id].push_back(c);
    }

    static const std::vector<RawComment> kNoComments;
    auto comments_of = [&](const RawPost& p) -> const std::vector<RawComment>& {
        auto it = grouped.find(p.post_id);
        return it == grouped.end() ? kNoComments : it->second;
    };

    out.resolutions.resize(kept.size());
    parallel_for(kept.size(), options.workers, [&](std::size_t i) {
        out.resolutions[i] = resolve_solved(kept[i], comments_of(kept[i]), options.resolve);
    });

    std::map<std::string, JudgeVerdict> verdicts;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto& res = out.resolutions[i];
        switch (res.status) {
            case SolvedStatus::Solved: ++stats.solved; break;
            case SolvedStatus::Unsolved: ++stats.unsolved; break;
            case SolvedStatus::Conflict: ++stats.conflict; break;
        }
        if (res.status == SolvedStatus::Unsolved && !res.warnings.empty() && kept[i].flair_css &&
            flair_marks_solved(*kept[i].flair_css)) {
            ++stats.flair_without_answer;
        }
        if (res.status != SolvedStatus::Solved || options.judge == nullptr) continue;
        auto verdict = judge_validate(kept[i], comments_of(kept[i]), res, *options.judge);
        if (!verdict) {
            ++stats.judge_absent;
            continue;
        }
        if (verdict->agrees_with_rule) {
            ++stats.judge_agree;
            res.evidence.insert(Evidence::JudgeConfirm);
        } else {
            ++stats.judge_disagree;
        }
        verdicts.emplace(res.post_id, std::move(*verdict));
    }

    out.records = build_records(kept, out.resolutions, verdicts, stats, options.tagger);
    return out;
}

}  // namespace totr::curation
