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

// Correlations, response times, and per-genre aggregates over content stats.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "totr/curation.hpp"

namespace totr::analysis {

/// Sample Pearson r. Throws InvalidArgument on length mismatch, fewer than
/// two points, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks, ties get the average of the positions they span.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson over average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Seconds from post creation to the solving comment. Throws on a negative
/// span and InvalidArgument when the resolution has no solved_at.
double response_time(const curation::RawPost& post, const curation::SolvedResolution& resolution);

struct ContentStat {
    std::string content_id;
    std::optional<std::int64_t> external_views;
    std::int64_t search_count = 0;
    std::optional<double> response_time_s;
    std::optional<std::string> genre;
    std::optional<std::int64_t> days_since_release;
};

/// Accepts days_since_release directly, or release_date plus posted_date
/// (both YYYY-MM-DD) and derives it.
ContentStat content_stat_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ContentStat& s);

std::vector<ContentStat> read_stats(const std::string& path, std::size_t* malformed = nullptr);

/// Bucket label used for stats without a genre.
inline constexpr const char* kUnknownGenre = "unknown";

struct GenreStat {
    std::string genre;
    std::size_t post_count = 0;
    std::size_t with_response_time = 0;
    std::optional<double> mean_response_hours;
    std::map<std::int64_t, std::size_t> years_since_release;  // floor(days / 365.25)
    std::size_t no_release_date = 0;
    bool low_support = false;
};

/// Sorted by genre name. Post counts sum to stats.size().
std::vector<GenreStat> genre_stats(std::span<const ContentStat> stats, std::size_t min_support = 5);

nlohmann::json to_json(const GenreStat& g);

/// log10(1 + v), the default view transform before correlating.
double log_views(double v);

struct CorrelationResult {
    std::string x;
    std::string y;
    std::size_t n = 0;
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::optional<std::string> note;  // why a coefficient is missing
};

nlohmann::json to_json(const CorrelationResult& c);

struct AnalysisReport {
    std::size_t n_stats = 0;
    bool raw_views = false;
    std::vector<CorrelationResult> correlations;
    std::vector<GenreStat> genres;
};

/// Views vs search count and views vs response time, plus genre aggregates.
AnalysisReport analyze(std::span<const ContentStat> stats, bool raw_views = false, std::size_t min_support = 5);

nlohmann::json to_json(const AnalysisReport& r);

/// Writes genres.csv and points.csv into dir.
void write_csvs(const AnalysisReport& report, std::span<const ContentStat> stats, const std::string& dir, bool raw_views);

}  // namespace totr::analysis
