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

#include <unordered_set>

#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/curation.hpp"

namespace totr::curation {

RawPost post_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::Malformed, "post is not an object");
    RawPost p;
    p.post_id = jsonl::require_string(j, "post_id");
    p.thread = jsonl::optional_string(j, "thread").value_or("");
    p.title = jsonl::require_string(j, "title");
    p.body = jsonl::optional_string(j, "body").value_or("");
    p.flair_css = jsonl::optional_string(j, "flair_css");
    p.author = jsonl::require_string(j, "author");
    auto created = jsonl::optional_integer(j, "created_at");
    if (!created) throw Error(Errc::Malformed, "missing integer field 'created_at'");
    p.created_at = *created;
    p.is_nsfw = jsonl::optional_bool(j, "is_nsfw").value_or(false);
    p.is_bot_author = jsonl::optional_bool(j, "is_bot_author").value_or(false);
    p.is_deleted = jsonl::optional_bool(j, "is_deleted").value_or(false);
    if (p.post_id.empty()) throw Error(Errc::Malformed, "empty post_id");
    if (p.created_at <= 0) throw Error(Errc::Malformed, "created_at must be positive");
    return p;
}

json to_json(const RawPost& p) {
    json j;
    j["post_id"] = p.post_id;
    j["thread"] = p.thread;
    j["title"] = p.title;
    j["body"] = p.body;
    j["flair_css"] = p.flair_css ? json(*p.flair_css) : json(nullptr);
    j["author"] = p.author;
    j["created_at"] = p.created_at;
    j["is_nsfw"] = p.is_nsfw;
    j["is_bot_author"] = p.is_bot_author;
    j["is_deleted"] = p.is_deleted;
    return j;
}

RawComment comment_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::Malformed, "comment is not an object");
    RawComment c;
    c.comment_id = jsonl::require_string(j, "comment_id");
    c.post_id = jsonl::require_string(j, "post_id");
    c.parent_id = jsonl::optional_string(j, "parent_id");
    c.author = jsonl::require_string(j, "author");
    c.body = jsonl::optional_string(j, "body").value_or("");
    c.is_moderator_bot = jsonl::optional_bool(j, "is_moderator_bot");
    auto created = jsonl::optional_integer(j, "created_at");
    if (!created) throw Error(Errc::Malformed, "missing integer field 'created_at'");
    c.created_at = *created;
    if (c.comment_id.empty()) throw Error(Errc::Malformed, "empty comment_id");
    return c;
}

json to_json(const RawComment& c) {
    json j;
    j["comment_id"] = c.comment_id;
    j["post_id"] = c.post_id;
    j["parent_id"] = c.parent_id ? json(*c.parent_id) : json(nullptr);
    j["author"] = c.author;
    j["body"] = c.body;
    if (c.is_moderator_bot) j["is_moderator_bot"] = *c.is_moderator_bot;
    j["created_at"] = c.created_at;
    return j;
}

PostArchive read_posts(std::istream& in) {
    PostArchive archive;
    std::unordered_set<std::string> seen;
    const std::size_t unparsed = jsonl::for_each(in, [&](const json& j, std::size_t) {
        try {
            RawPost p = post_from_json(j);
            if (!seen.insert(p.post_id).second) {
                ++archive.malformed;
                return;
            }
            archive.posts.push_back(std::move(p));
        } catch (const Error&) {
            ++archive.malformed;
        } catch (const json::exception&) {
            ++archive.malformed;
        }
    });
    archive.malformed += unparsed;  // lines that were not JSON at all
    return archive;
}

CommentArchive read_comments(std::istream& in) {
    CommentArchive archive;
    std::unordered_set<std::string> seen;
    const std::size_t unparsed = jsonl::for_each(in, [&](const json& j, std::size_t) {
        try {
            RawComment c = comment_from_json(j);
            if (!seen.insert(c.comment_id).second) {
                ++archive.malformed;
                return;
            }
            archive.comments.push_back(std::move(c));
        } catch (const Error&) {
            ++archive.malformed;
        } catch (const json::exception&) {
            ++archive.malformed;
        }
    });
    archive.malformed += unparsed;  // lines that were not JSON at all
    return archive;
}

json to_json(const FilterReport& r) {
    return json{{"input", r.input},   {"kept", r.kept},       {"nsfw", r.nsfw},
                {"bot_author", r.bot_author}, {"deleted", r.deleted}, {"malformed", r.malformed}};
}

std::vector<RawPost> filter_posts(std::span<const RawPost> posts, FilterReport& report) {
    std::vector<RawPost> kept;
    kept.reserve(posts.size());
    for (const auto& p : posts) {
        ++report.input;
        if (p.is_nsfw) {
            ++report.nsfw;
        } else if (p.is_bot_author) {
            ++report.bot_author;
        } else if (p.is_deleted) {
            ++report.deleted;
        } else {
            kept.push_back(p);
            ++report.kept;
        }
    }
    return kept;
}

}  // namespace totr::curation
