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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "totr/analysis.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"

namespace totr::analysis {

using nlohmann::json;

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error(Errc::InvalidArgument, "pearson: series lengths differ");
    if (xs.size() < 2) throw Error(Errc::InvalidArgument, "pearson: need at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(Errc::InvalidArgument, "pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error(Errc::InvalidArgument, "spearman: series lengths differ");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

double response_time(const curation::RawPost& post, const curation::SolvedResolution& resolution) {
    if (!resolution.solved_at) throw Error(Errc::InvalidArgument, "post " + post.post_id + " has no solved_at");
    const auto dt = *resolution.solved_at - post.created_at;
    if (dt < 0) throw Error(Errc::NumericalError, "post " + post.post_id + " was answered before it was made");
    return static_cast<double>(dt);
}

namespace {

std::int64_t days_from_iso(const std::string& s) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
        throw Error(Errc::Malformed, "expected YYYY-MM-DD, got '" + s + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw Error(Errc::Malformed, "invalid date '" + s + "'");
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

}  // namespace

ContentStat content_stat_from_json(const json& j) {
    ContentStat s;
    s.content_id = jsonl::require_string(j, "content_id");
    s.external_views = jsonl::optional_integer(j, "external_views");
    s.search_count = jsonl::optional_integer(j, "search_count").value_or(0);
    s.response_time_s = jsonl::optional_number(j, "response_time_s");
    s.genre = jsonl::optional_string(j, "genre");
    s.days_since_release = jsonl::optional_integer(j, "days_since_release");
    if (!s.days_since_release) {
        auto rel = jsonl::optional_string(j, "release_date");
        auto posted = jsonl::optional_string(j, "posted_date");
        if (rel && posted) s.days_since_release = days_from_iso(*posted) - days_from_iso(*rel);
    }
    if (s.search_count < 0 || (s.external_views && *s.external_views < 0)) {
        throw Error(Errc::Malformed, "negative count for " + s.content_id);
    }
    if (s.response_time_s && *s.response_time_s < 0) {
        throw Error(Errc::Malformed, "negative response time for " + s.content_id);
    }
    return s;
}

json to_json(const ContentStat& s) {
    json j{{"content_id", s.content_id}, {"search_count", s.search_count}};
    j["external_views"] = s.external_views ? json(*s.external_views) : json(nullptr);
    j["response_time_s"] = s.response_time_s ? json(*s.response_time_s) : json(nullptr);
    j["genre"] = s.genre ? json(*s.genre) : json(nullptr);
    j["days_since_release"] = s.days_since_release ? json(*s.days_since_release) : json(nullptr);
    return j;
}

std::vector<ContentStat> read_stats(const std::string& path, std::size_t* malformed) {
    std::vector<ContentStat> out;
    std::size_t bad = 0;
    bad += jsonl::for_each_file(path, [&](const json& j, std::size_t) {
        try {
            out.push_back(content_stat_from_json(j));
        } catch (const Error&) {
            ++bad;
        }
    });
    if (malformed) *malformed = bad;
    return out;
}

std::vector<GenreStat> genre_stats(std::span<const ContentStat> stats, std::size_t min_support) {
    std::map<std::string, GenreStat> groups;
    std::map<std::string, double> rt_sum;
    for (const auto& s : stats) {
        const std::string key = s.genre && !s.genre->empty() ? *s.genre : kUnknownGenre;
        GenreStat& g = groups[key];
        g.genre = key;
        ++g.post_count;
        if (s.response_time_s) {
            ++g.with_response_time;
            rt_sum[key] += *s.response_time_s;
        }
        if (s.days_since_release && *s.days_since_release >= 0) {
            ++g.years_since_release[static_cast<std::int64_t>(std::floor(static_cast<double>(*s.days_since_release) / 365.25))];
        } else {
            ++g.no_release_date;
        }
    }
    std::vector<GenreStat> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) {
        if (g.with_response_time) g.mean_response_hours = rt_sum[key] / static_cast<double>(g.with_response_time) / 3600.0;
        g.low_support = g.post_count < min_support;
        out.push_back(std::move(g));
    }
    return out;
}

json to_json(const GenreStat& g) {
    json hist = json::object();
    for (const auto& [y, c] : g.years_since_release) hist[std::to_string(y)] = c;
    return {{"genre", g.genre},
            {"post_count", g.post_count},
            {"with_response_time", g.with_response_time},
            {"mean_response_hours", g.mean_response_hours ? json(*g.mean_response_hours) : json(nullptr)},
            {"years_since_release", std::move(hist)},
            {"no_release_date", g.no_release_date},
            {"low_support", g.low_support}};
}

double log_views(double v) { return std::log10(1.0 + v); }

json to_json(const CorrelationResult& c) {
    return {{"x", c.x},
            {"y", c.y},
            {"n", c.n},
            {"pearson", c.pearson ? json(*c.pearson) : json(nullptr)},
            {"spearman", c.spearman ? json(*c.spearman) : json(nullptr)},
            {"note", c.note ? json(*c.note) : json(nullptr)}};
}

namespace {

CorrelationResult correlate(std::string x, std::string y, const std::vector<double>& xs, const std::vector<double>& ys) {
    CorrelationResult c{std::move(x), std::move(y), xs.size(), {}, {}, {}};
    try {
        c.pearson = pearson(xs, ys);
        c.spearman = spearman(xs, ys);
    } catch (const Error& e) {
        c.pearson.reset();
        c.spearman.reset();
        c.note = e.what();
    }
    return c;
}

}  // namespace

AnalysisReport analyze(std::span<const ContentStat> stats, bool raw_views, std::size_t min_support) {
    AnalysisReport r;
    r.n_stats = stats.size();
    r.raw_views = raw_views;
    const std::string views = raw_views ? "external_views" : "log10(1+external_views)";
    std::vector<double> v1, searches, v2, rts;
    for (const auto& s : stats) {
        if (!s.external_views) continue;
        const double v = raw_views ? static_cast<double>(*s.external_views) : log_views(static_cast<double>(*s.external_views));
        v1.push_back(v);
        searches.push_back(static_cast<double>(s.search_count));
        if (s.response_time_s) {
            v2.push_back(v);
            rts.push_back(*s.response_time_s / 3600.0);
        }
    }
    r.correlations.push_back(correlate(views, "search_count", v1, searches));
    r.correlations.push_back(correlate(views, "response_hours", v2, rts));
    r.genres = genre_stats(stats, min_support);
    return r;
}

json to_json(const AnalysisReport& r) {
    json corr = json::array();
    for (const auto& c : r.correlations) corr.push_back(to_json(c));
    json genres = json::array();
    for (const auto& g : r.genres) genres.push_back(to_json(g));
    return {{"n_stats", r.n_stats}, {"raw_views", r.raw_views}, {"correlations", std::move(corr)}, {"genres", std::move(genres)}};
}

void write_csvs(const AnalysisReport& report, std::span<const ContentStat> stats, const std::string& dir, bool raw_views) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(std::filesystem::path(dir) / "genres.csv");
        if (!out) throw Error(Errc::Io, "cannot write genres.csv in " + dir);
        out << "genre,post_count,mean_response_hours,low_support\n";
        for (const auto& g : report.genres) {
            out << '"' << g.genre << "\"," << g.post_count << ',';
            if (g.mean_response_hours) out << *g.mean_response_hours;
            out << ',' << (g.low_support ? 1 : 0) << '\n';
        }
    }
    std::ofstream out(std::filesystem::path(dir) / "points.csv");
    if (!out) throw Error(Errc::Io, "cannot write points.csv in " + dir);
    out << "content_id,views,search_count,response_hours,genre\n";
    for (const auto& s : stats) {
        out << '"' << s.content_id << "\",";
        if (s.external_views) {
            out << (raw_views ? static_cast<double>(*s.external_views) : log_views(static_cast<double>(*s.external_views)));
        }
        out << ',' << s.search_count << ',';
        if (s.response_time_s) out << *s.response_time_s / 3600.0;
        out << ",\"" << s.genre.value_or("") << "\"\n";
    }
}

}  // namespace totr::analysis
