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

#pragma once

// Forum-archive curation: post filtering, "solved" resolution, answer-link
// extraction, judge cross-validation, sentence tagging, and record building.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "totr/clients.hpp"

namespace totr::curation {

using nlohmann::json;

struct RawPost {
    std::string post_id;
    std::string thread;
    std::string title;
    std::string body;
    std::optional<std::string> flair_css;
    std::string author;
    std::int64_t created_at = 0;
    bool is_nsfw = false;
    bool is_bot_author = false;
    bool is_deleted = false;
};

struct RawComment {
    std::string comment_id;
    std::string post_id;
    std::optional<std::string> parent_id;  // absent: top-level reply to the post
    std::string author;
    std::string body;
    // Absent when the archive carries no moderator flag; see is_moderator_bot().
    std::optional<bool> is_moderator_bot;
    std::int64_t created_at = 0;
};

RawPost post_from_json(const json& j);
json to_json(const RawPost& p);
RawComment comment_from_json(const json& j);
json to_json(const RawComment& c);

struct PostArchive {
    std::vector<RawPost> posts;
    std::size_t malformed = 0;
};

struct CommentArchive {
    std::vector<RawComment> comments;
    std::size_t malformed = 0;
};

/// Malformed lines (bad JSON, missing required fields, empty or duplicate
/// post_id, non-positive created_at) are counted and skipped.
PostArchive read_posts(std::istream& in);
CommentArchive read_comments(std::istream& in);

struct FilterReport {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t nsfw = 0;
    std::size_t bot_author = 0;
    std::size_t deleted = 0;
    std::size_t malformed = 0;
};

json to_json(const FilterReport& r);

/// Drops NSFW, bot-authored, and deleted posts, preserving order. A post
/// with several flags is counted once, under the first of nsfw, bot, deleted.
std::vector<RawPost> filter_posts(std::span<const RawPost> posts, FilterReport& report);

// ---------------------------------------------------------------------------

enum class SolvedStatus { Solved, Unsolved, Conflict };
enum class Evidence { FlairTag, OpReply, ModBotConfirm, JudgeConfirm };

std::string_view to_string(SolvedStatus s) noexcept;
std::string_view to_string(Evidence e) noexcept;
SolvedStatus status_from_string(std::string_view s);

struct SolvedResolution {
    std::string post_id;
    SolvedStatus status = SolvedStatus::Unsolved;
    std::string answer_text;
    std::vector<std::string> answer_links;
    std::set<Evidence> evidence;
    std::optional<std::string> solving_comment_id;
    std::optional<std::int64_t> solved_at;
    std::vector<std::string> warnings;
};

json to_json(const SolvedResolution& r);

struct ResolveOptions {
    std::vector<std::string> confirm_phrases{"solved", "that's it", "yes!"};
    // On conflicting signals, take the original poster's confirmation.
    bool prefer_op_reply = false;
};

/// Moderator-bot flag from the archive when present, else an author name
/// ending in "bot" (case-insensitive).
bool is_moderator_bot(const RawComment& c);

/// True when `flair` contains a standalone "solved" token (case-insensitive).
bool flair_marks_solved(std::string_view flair);

/// True when `body` contains one of the phrases with no word character
/// touching it on either side.
bool contains_confirmation(std::string_view body, std::span<const std::string> phrases);

SolvedResolution resolve_solved(const RawPost& post, std::span<const RawComment> comments,
                                const ResolveOptions& options = {});

/// All http(s) URLs in order of first appearance, deduplicated. Markdown
/// links are unwrapped first; a URL ends at whitespace or a closing bracket,
/// and trailing sentence punctuation is dropped.
std::vector<std::string> extract_links(std::string_view body);

/// YouTube video id from a watch / youtu.be / shorts / embed URL.
std::optional<std::string> youtube_video_id(std::string_view url);

// ---------------------------------------------------------------------------

struct JudgeVerdict {
    std::string content_name;
    std::string category;
    std::string genre;
    std::vector<std::string> objects;
    std::vector<std::string> emotions;
    bool agrees_with_rule = false;
};

json to_json(const JudgeVerdict& v);

/// Fixed preamble of the validation prompt.
extern const std::string_view kJudgePromptTemplate;

std::string judge_prompt(const RawPost& post, std::string_view answer);

/// Extracts the first JSON object in a free-form reply. nullopt when none
/// parses or it lacks a content name.
std::optional<JudgeVerdict> parse_judge_reply(std::string_view reply);

/// Normalized-substring match on the answer text, or equality of any link.
bool answers_agree(std::string_view content_name, const SolvedResolution& resolution);

/// Asks the judge to name the content item. nullopt when the judge is
/// unreachable or replies unparseably twice in a row. The rule-based answer
/// is never replaced; disagreement only clears agrees_with_rule.
std::optional<JudgeVerdict> judge_validate(const RawPost& post, std::span<const RawComment> comments,
                                           const SolvedResolution& resolution, clients::JudgeClient& judge);

// ---------------------------------------------------------------------------

enum class SentenceTag { ContentSemantic, ContentNonSemantic, Episodic, Other };

std::string_view to_string(SentenceTag t) noexcept;
std::optional<SentenceTag> sentence_tag_from_string(std::string_view s);

struct TaggedSentence {
    std::string text;
    SentenceTag tag = SentenceTag::Other;
};

/// Sentence boundaries: terminal punctuation followed by whitespace, and
/// line breaks. Pieces are trimmed; empties dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Fallback tagger: a first/second-person pronoun together with a past-tense
/// cue marks an episodic sentence; anything else is non-semantic content.
SentenceTag heuristic_tag(std::string_view sentence);

std::vector<TaggedSentence> tag_sentences(std::string_view recall_text, clients::JudgeClient* tagger = nullptr);

/// The non-episodic sentences, joined by single spaces in original order.
std::string strip_episodic(std::span<const TaggedSentence> sentences);

// ---------------------------------------------------------------------------

struct RecallRecord {
    std::string record_id;
    std::string recall_text;
    std::string answer_text;
    std::vector<std::string> answer_links;
    std::optional<std::string> category;
    std::optional<std::string> genre;
    std::vector<SentenceTag> sentence_tags;
    std::optional<double> solved_latency_s;
};

json to_json(const RecallRecord& r);
RecallRecord record_from_json(const json& j);

/// Recall text for a post: title and body on separate lines.
std::string recall_text_of(const RawPost& post);

struct CorpusStats {
    std::size_t total_posts = 0;
    std::size_t malformed_posts = 0;
    std::size_t filtered_nsfw = 0;
    std::size_t filtered_bot_author = 0;
    std::size_t filtered_deleted = 0;
    std::size_t post_filter = 0;
    std::size_t total_comments = 0;
    std::size_t malformed_comments = 0;
    std::size_t dangling_comments = 0;
    std::size_t solved = 0;
    std::size_t unsolved = 0;
    std::size_t conflict = 0;
    std::size_t flair_without_answer = 0;
    std::size_t judge_agree = 0;
    std::size_t judge_disagree = 0;
    std::size_t judge_absent = 0;
    std::size_t dangling_resolutions = 0;
    std::size_t negative_latency = 0;
    std::size_t records = 0;
};

json to_json(const CorpusStats& s);

/// One record per Solved resolution, sorted by record_id. Resolutions whose
/// post is unknown are skipped and counted.
std::vector<RecallRecord> build_records(std::span<const RawPost> posts, std::span<const SolvedResolution> resolutions,
                                        const std::map<std::string, JudgeVerdict>& verdicts, CorpusStats& stats,
                                        clients::JudgeClient* tagger = nullptr);

struct CurationOptions {
    ResolveOptions resolve;
    std::size_t workers = 1;
    clients::JudgeClient* judge = nullptr;
    // Sentence tagging via the judge service; heuristic fallback when null.
    clients::JudgeClient* tagger = nullptr;
};

struct CurationResult {
    std::vector<RecallRecord> records;
    std::vector<SolvedResolution> resolutions;  // one per surviving post, sorted by post_id
    CorpusStats stats;
};

CurationResult run_curation(const PostArchive& posts, const CommentArchive& comments, const CurationOptions& options);

}  // namespace totr::curation
