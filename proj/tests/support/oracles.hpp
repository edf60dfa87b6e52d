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

// Independent reference computations used as test oracles. Each one is
// written the slow, obvious way and shares no code with the library.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "stubs.hpp"
#include "totr/embedding.hpp"

namespace totr::testing::oracle {

// ---- curation --------------------------------------------------------------

/// post_id -> first matching flag among nsfw, bot_author, deleted.
inline std::map<std::string, std::string> filter_reasons(const std::vector<nlohmann::json>& raw_posts) {
    std::map<std::string, std::string> reason;
    for (const auto& p : raw_posts) {
        const auto id = p["post_id"].get<std::string>();
        if (p["is_nsfw"].get<bool>()) reason[id] = "nsfw";
        else if (p["is_bot_author"].get<bool>()) reason[id] = "bot_author";
        else if (p["is_deleted"].get<bool>()) reason[id] = "deleted";
    }
    return reason;
}

// ---- scenes ----------------------------------------------------------------

inline std::string ocr_key(const std::string& s) {
    std::string out;
    bool gap = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            gap = !out.empty();
            continue;
        }
        if (gap) out.push_back(' ');
        gap = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

/// A scene survives when its neighbour before it reads differently once
/// whitespace and case are ignored; over-long lists are thinned by the
/// rounding formula with both ends pinned.
inline std::vector<int> dedup(const std::vector<std::string>& ocr, std::size_t cap) {
    std::vector<int> kept;
    for (std::size_t i = 0; i < ocr.size(); ++i) {
        if (i == 0 || ocr_key(ocr[i]) != ocr_key(ocr[i - 1])) kept.push_back(static_cast<int>(i));
    }
    if (kept.size() <= cap) return kept;
    std::vector<int> thin;
    const double step = static_cast<double>(kept.size() - 1) / static_cast<double>(cap - 1);
    for (std::size_t j = 0; j < cap; ++j) thin.push_back(kept[static_cast<std::size_t>(std::llround(j * step))]);
    return thin;
}

// ---- search ----------------------------------------------------------------

/// Score every row in double, full sort by (score desc, id asc).
inline std::vector<std::string> scan(const embedding::EmbeddingMatrix& m, std::span<const float> q, std::size_t k) {
    std::vector<std::pair<double, std::string>> all;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double s = 0;
        for (std::size_t d = 0; d < m.dim(); ++d) s += static_cast<double>(m.row(r)[d]) * static_cast<double>(q[d]);
        all.emplace_back(s, m.id(r));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
    return out;
}

// ---- contrastive -----------------------------------------------------------

/// -log(phi+ / (phi+ + sum phi-)) with plain exponentials.
inline double info_nce(const std::vector<double>& q, const std::vector<double>& p,
                       const std::vector<std::vector<double>>& negs, double tau) {
    auto cosd = [](const std::vector<double>& a, const std::vector<double>& b) {
        double d = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        return d / std::sqrt(na * nb);
    };
    const double pos = std::exp(cosd(q, p) / tau);
    double den = pos;
    for (const auto& n : negs) den += std::exp(cosd(q, n) / tau);
    return -std::log(pos / den);
}

// ---- text metrics ----------------------------------------------------------

inline std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        const unsigned char u = static_cast<unsigned char>(ch);
        if (std::isalnum(u) || u >= 0x80) {
            cur.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::vector<std::string> grams(const std::vector<std::string>& t, std::size_t n) {
    std::vector<std::string> g;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
        std::string s;
        for (std::size_t j = i; j < i + n; ++j) s += t[j] + '\x1f';
        g.push_back(s);
    }
    return g;
}

inline std::size_t count_in(const std::vector<std::string>& v, const std::string& x) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), x));
}

inline double bleu(const std::string& cand, const std::vector<std::string>& refs, std::size_t max_n = 4) {
    const auto c = tokens(cand);
    std::vector<std::vector<std::string>> r;
    for (const auto& x : refs) r.push_back(tokens(x));
    double log_sum = 0;
    int orders = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto cg = grams(c, n);
        if (cg.empty()) continue;
        std::vector<std::string> seen;
        double matched = 0;
        for (const auto& g : cg) {
            if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
            seen.push_back(g);
            std::size_t ref_max = 0;
            for (const auto& rt : r) ref_max = std::max(ref_max, count_in(grams(rt, n), g));
            matched += static_cast<double>(std::min(count_in(cg, g), ref_max));
        }
        if (matched == 0) return 0.0;
        log_sum += std::log(matched / static_cast<double>(cg.size()));
        ++orders;
    }
    if (orders == 0) return 0.0;
    std::size_t best = r[0].size();
    for (const auto& rt : r) {
        const long d = std::labs(long(rt.size()) - long(c.size()));
        const long db = std::labs(long(best) - long(c.size()));
        if (d < db || (d == db && rt.size() < best)) best = rt.size();
    }
    const double bp = c.size() >= best ? 1.0 : std::exp(1.0 - double(best) / double(c.size()));
    return bp * std::exp(log_sum / orders);
}

struct Prf {
    double precision = 0, recall = 0, f1 = 0;
};

inline Prf prf(double overlap, double ct, double rt) {
    Prf p;
    p.precision = ct ? overlap / ct : 0;
    p.recall = rt ? overlap / rt : 0;
    p.f1 = (p.precision + p.recall) > 0 ? 2 * p.precision * p.recall / (p.precision + p.recall) : 0;
    return p;
}

inline Prf rouge_n(const std::string& cand, const std::string& ref, std::size_t n) {
    const auto cg = grams(tokens(cand), n);
    const auto rg = grams(tokens(ref), n);
    std::vector<std::string> seen;
    double overlap = 0;
    for (const auto& g : cg) {
        if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
        seen.push_back(g);
        overlap += static_cast<double>(std::min(count_in(cg, g), count_in(rg, g)));
    }
    return prf(overlap, double(cg.size()), double(rg.size()));
}

/// Full table, recursion written out directly.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = a.size(); i-- > 0;) {
        for (std::size_t j = b.size(); j-- > 0;) {
            t[i][j] = a[i] == b[j] ? 1 + t[i + 1][j + 1] : std::max(t[i + 1][j], t[i][j + 1]);
        }
    }
    return t[0][0];
}

inline Prf rouge_l(const std::string& cand, const std::string& ref) {
    const auto c = tokens(cand), r = tokens(ref);
    return prf(double(lcs(c, r)), double(c.size()), double(r.size()));
}

/// Greedy token matching with the hash stub's vectors, cosines in double.
inline double embed_f1_hash(const std::string& cand, const std::string& ref, std::size_t dim) {
    const auto c = tokens(cand), r = tokens(ref);
    auto cosd = [&](const std::string& a, const std::string& b) {
        if (a == b) return 1.0;
        auto va = HashEmbedder::vector_for(a, dim), vb = HashEmbedder::vector_for(b, dim);
        double d = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            d += double(va[i]) * vb[i];
            na += double(va[i]) * va[i];
            nb += double(vb[i]) * vb[i];
        }
        return std::clamp(d / std::sqrt(na * nb), 0.0, 1.0);
    };
    auto side = [&](const std::vector<std::string>& x, const std::vector<std::string>& y) {
        double s = 0;
        for (const auto& a : x) {
            double best = 0;
            for (const auto& b : y) best = std::max(best, cosd(a, b));
            s += best;
        }
        return s / double(x.size());
    };
    const double p = side(c, r), q = side(r, c);
    return p + q > 0 ? 2 * p * q / (p + q) : 0.0;
}

// ---- statistics ------------------------------------------------------------

/// Single-pass textbook formula in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += (long double)x[i] * x[i];
        syy += (long double)y[i] * y[i];
        sxy += (long double)x[i] * y[i];
    }
    return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

/// rank = (#less) + (#equal + 1) / 2
inline std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double less = 0, eq = 0;
        for (double v : x) {
            if (v < x[i]) less += 1;
            if (v == x[i]) eq += 1;
        }
        r[i] = less + (eq + 1) / 2;
    }
    return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) { return pearson(ranks(x), ranks(y)); }

}  // namespace totr::testing::oracle
