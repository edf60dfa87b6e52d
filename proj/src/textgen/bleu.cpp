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
#include <cstdlib>
#include <map>

#include "totr/core/errors.hpp"
#include "totr/textgen_metrics.hpp"

namespace totr::textgen {

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngram_counts(std::span<const std::string> toks, std::size_t n) {
    Counts out;
    if (toks.size() < n) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        ++out[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
    }
    return out;
}

}  // namespace

BleuStats bleu_stats(std::span<const std::string> cand, std::span<const std::vector<std::string>> refs, std::size_t max_n) {
    if (max_n == 0) throw Error(Errc::InvalidArgument, "max_n must be positive");
    if (cand.empty()) throw Error(Errc::InvalidArgument, "candidate has no tokens");
    if (refs.empty()) throw Error(Errc::InvalidArgument, "bleu needs at least one reference");

    BleuStats s;
    s.cand_len = cand.size();
    // closest reference length; shorter wins ties so order never matters
    std::size_t best = refs.front().size();
    for (const auto& r : refs) {
        const auto d = [&](std::size_t len) { return len > cand.size() ? len - cand.size() : cand.size() - len; };
        if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) best = r.size();
    }
    s.ref_len = best;

    for (std::size_t n = 1; n <= max_n; ++n) {
        const Counts c = ngram_counts(cand, n);
        Counts max_ref;
        for (const auto& r : refs) {
            for (const auto& [g, k] : ngram_counts(r, n)) {
                auto& m = max_ref[g];
                m = std::max(m, k);
            }
        }
        std::size_t matched = 0, total = 0;
        for (const auto& [g, k] : c) {
            total += k;
            auto it = max_ref.find(g);
            if (it != max_ref.end()) matched += std::min(k, it->second);
        }
        s.matches.push_back(matched);
        s.totals.push_back(total);
    }
    return s;
}

double bleu_from_stats(const BleuStats& s) {
    double log_sum = 0.0;
    std::size_t orders = 0;
    for (std::size_t i = 0; i < s.totals.size(); ++i) {
        if (s.totals[i] == 0) continue;
        if (s.matches[i] == 0) return 0.0;
        log_sum += std::log(static_cast<double>(s.matches[i]) / static_cast<double>(s.totals[i]));
        ++orders;
    }
    if (orders == 0) return 0.0;
    const double bp = s.cand_len >= s.ref_len
                          ? 1.0
                          : std::exp(1.0 - static_cast<double>(s.ref_len) / static_cast<double>(s.cand_len));
    return std::clamp(bp * std::exp(log_sum / static_cast<double>(orders)), 0.0, 1.0);
}

double bleu(std::string_view candidate, std::span<const std::string> references, std::size_t max_n) {
    const auto cand = tokenize(candidate);
    std::vector<std::vector<std::string>> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(tokenize(r));
    return bleu_from_stats(bleu_stats(cand, refs, max_n));
}

double corpus_bleu(std::span<const std::string> candidates, std::span<const std::vector<std::string>> references,
                   std::size_t max_n) {
    if (candidates.size() != references.size()) throw Error(Errc::InvalidArgument, "candidate/reference count mismatch");
    if (candidates.empty()) throw Error(Errc::InvalidArgument, "corpus_bleu needs at least one pair");
    BleuStats total;
    total.matches.assign(max_n, 0);
    total.totals.assign(max_n, 0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::vector<std::vector<std::string>> refs;
        for (const auto& r : references[i]) refs.push_back(tokenize(r));
        const BleuStats s = bleu_stats(tokenize(candidates[i]), refs, max_n);
        for (std::size_t n = 0; n < max_n; ++n) {
            total.matches[n] += s.matches[n];
            total.totals[n] += s.totals[n];
        }
        total.cand_len += s.cand_len;
        total.ref_len += s.ref_len;
    }
    return bleu_from_stats(total);
}

}  // namespace totr::textgen
