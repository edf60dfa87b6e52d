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
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "totr/analysis.hpp"
#include "totr/core/errors.hpp"

using namespace totr;
using namespace totr::analysis;
namespace oracle = totr::testing::oracle;

namespace {

ContentStat stat(const std::string& id, std::optional<std::string> genre, std::optional<double> rt,
                 std::optional<std::int64_t> days = std::nullopt) {
    ContentStat s;
    s.content_id = id;
    s.genre = std::move(genre);
    s.response_time_s = rt;
    s.days_since_release = days;
    return s;
}

}  // namespace

TEST_CASE("pearson and spearman examples") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 6, 8, 10};
    const std::vector<double> neg{-1, -2, -3, -4, -5};
    CHECK(std::abs(pearson(x, y) - 1.0) < 1e-12);
    CHECK(std::abs(pearson(x, neg) + 1.0) < 1e-12);
    const std::vector<double> cube{1, 8, 27, 64, 125};
    CHECK(spearman(x, cube) == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<double> flat{3, 3, 3, 3, 3};
    CHECK_THROWS_AS(pearson(x, flat), Error);
    CHECK_THROWS_AS(spearman(flat, x), Error);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{2}), Error);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), Error);
}

TEST_CASE("10-point fixture against the closed form") {
    const std::vector<double> x{3.1, 0.5, 7.7, 2.2, 9.0, 4.4, 6.1, 1.9, 8.3, 5.5};
    const std::vector<double> y{2.0, 1.1, 6.5, 3.9, 7.2, 3.3, 7.7, 0.4, 9.9, 4.0};
    CHECK(std::abs(pearson(x, y) - oracle::pearson(x, y)) < 1e-9);
    CHECK(std::abs(spearman(x, y) - oracle::pearson(oracle::ranks(x), oracle::ranks(y))) < 1e-9);
}

TEST_CASE("tie-heavy spearman against a manual rank table") {
    const std::vector<double> x{1, 1, 2, 2, 2, 3, 4, 4};
    const std::vector<double> y{5, 3, 3, 3, 1, 2, 2, 9};
    // x ranks: 1.5 1.5 4 4 4 6 7.5 7.5 ; y ranks: 7 5 5 5 1 2.5 2.5 8
    const std::vector<double> rx{1.5, 1.5, 4, 4, 4, 6, 7.5, 7.5};
    const std::vector<double> ry{7, 5, 5, 5, 1, 2.5, 2.5, 8};
    CHECK(average_ranks(x) == rx);
    CHECK(average_ranks(y) == ry);
    CHECK(std::abs(spearman(x, y) - oracle::pearson(rx, ry)) < 1e-9);
}

TEST_CASE("stats fixture: views vs searches against the closed form") {
    std::size_t bad = 0;
    auto stats = read_stats((testing::data_dir() / "analysis/stats.jsonl").string(), &bad);
    CHECK(bad == 0);
    REQUIRE(stats.size() == 120);
    std::vector<double> v, s;
    for (const auto& st : stats) {
        if (!st.external_views) continue;
        v.push_back(std::log10(1.0 + static_cast<double>(*st.external_views)));
        s.push_back(static_cast<double>(st.search_count));
    }
    auto report = analyze(stats);
    REQUIRE_FALSE(report.correlations.empty());
    const auto& c = report.correlations[0];
    CHECK(c.n == v.size());
    REQUIRE(c.pearson.has_value());
    CHECK(std::abs(*c.pearson - oracle::pearson(v, s)) < 1e-9);
    CHECK(std::abs(*c.spearman - oracle::pearson(oracle::ranks(v), oracle::ranks(s))) < 1e-9);

    std::size_t total = 0;
    for (const auto& g : report.genres) total += g.post_count;
    CHECK(total == stats.size());
}

TEST_CASE("affine and monotone invariance on 50 random series") {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = g(rng);
            y[i] = 0.6 * x[i] + g(rng);
        }
        const double r = pearson(x, y);
        const double a = u(rng), b = g(rng) * 10;
        std::vector<double> ax(x.size()), negx(x.size()), mx(x.size()), my(y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            ax[i] = a * x[i] + b;
            negx[i] = -a * x[i] + b;
            mx[i] = std::exp(x[i]);
            my[i] = y[i] * y[i] * y[i] + 2 * y[i];
        }
        CHECK(std::abs(pearson(x, ax) - 1.0) < 1e-9);
        CHECK(std::abs(pearson(ax, y) - r) < 1e-9);
        CHECK(std::abs(pearson(negx, y) + r) < 1e-9);
        const double s = spearman(x, y);
        CHECK(std::abs(spearman(mx, my) - s) < 1e-9);
        CHECK(std::abs(spearman(x, my) - s) < 1e-9);
    }
}

TEST_CASE("response_time") {
    curation::RawPost p;
    p.post_id = "p";
    p.created_at = 1000;
    curation::SolvedResolution r;
    r.solved_at = 4600;
    CHECK(response_time(p, r) == 3600.0);
    r.solved_at = 10;
    CHECK_THROWS_AS(response_time(p, r), Error);
    r.solved_at.reset();
    CHECK_THROWS_AS(response_time(p, r), Error);
}

TEST_CASE("genre_stats cases") {
    CHECK(genre_stats({}).empty());

    std::vector<ContentStat> one{stat("a", "drama", 3600), stat("b", "drama", 7200), stat("c", "drama", std::nullopt)};
    auto g1 = genre_stats(one);
    REQUIRE(g1.size() == 1);
    CHECK(g1[0].genre == "drama");
    CHECK(g1[0].post_count == 3);
    CHECK(g1[0].with_response_time == 2);
    CHECK(*g1[0].mean_response_hours == doctest::Approx(1.5));
    CHECK(g1[0].low_support);

    std::vector<ContentStat> two;
    for (int i = 0; i < 6; ++i) two.push_back(stat("h" + std::to_string(i), "horror", 3600.0 * (i + 1), 365 * i + 100));
    two.push_back(stat("c0", "comedy", 1800, 400));
    two.push_back(stat("c1", "comedy", 5400));
    two.push_back(stat("u0", std::nullopt, std::nullopt, 10));
    auto g2 = genre_stats(two);
    REQUIRE(g2.size() == 3);
    CHECK(g2[0].genre == "comedy");
    CHECK(g2[1].genre == "horror");
    CHECK(g2[2].genre == kUnknownGenre);
    // hand aggregate
    CHECK(*g2[0].mean_response_hours == doctest::Approx(1.0));
    CHECK(g2[0].no_release_date == 1);
    CHECK(g2[0].years_since_release.at(1) == 1);
    CHECK(*g2[1].mean_response_hours == doctest::Approx(3.5));
    CHECK_FALSE(g2[1].low_support);
    // 100, 465, 830, 1195, 1560, 1925 days -> years 0,1,2,3,4,5
    for (std::int64_t y = 0; y < 6; ++y) CHECK(g2[1].years_since_release.at(y) == 1);
    CHECK_FALSE(g2[2].mean_response_hours.has_value());
    std::size_t total = 0;
    for (const auto& g : g2) total += g.post_count;
    CHECK(total == two.size());
}

TEST_CASE("content_stat parsing derives days since release") {
    auto s = content_stat_from_json(nlohmann::json{{"content_id", "x"},
                                                   {"search_count", 3},
                                                   {"release_date", "2020-01-01"},
                                                   {"posted_date", "2021-01-01"}});
    CHECK(s.days_since_release == std::optional<std::int64_t>(366));
    CHECK_THROWS_AS(content_stat_from_json(nlohmann::json{{"content_id", "x"}, {"search_count", -1}}), Error);
    CHECK(log_views(9.0) == doctest::Approx(1.0));
}

TEST_CASE("csv output") {
    auto stats = read_stats((testing::data_dir() / "analysis/stats.jsonl").string());
    auto report = analyze(stats, true);
    CHECK(report.raw_views);
    auto dir = testing::scratch_dir("csv");
    write_csvs(report, stats, dir.string(), true);
    auto genres = jsonl::read_text_file(dir / "genres.csv");
    auto points = jsonl::read_text_file(dir / "points.csv");
    CHECK(std::count(genres.begin(), genres.end(), '\n') == static_cast<long>(report.genres.size()) + 1);
    CHECK(std::count(points.begin(), points.end(), '\n') == 121);
}
