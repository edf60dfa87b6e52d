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
#include <map>

#include "totr/core/errors.hpp"
#include "totr/textgen_metrics.hpp"

namespace totr::textgen {

namespace {

Prf make_prf(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
    Prf out;
    out.precision = cand_total ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0.0;
    out.recall = ref_total ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
    const double s = out.precision + out.recall;
    out.f1 = s > 0.0 ? 2.0 * out.precision * out.recall / s : 0.0;
    return out;
}

}  // namespace

Prf rouge_n(std::string_view candidate, std::string_view reference, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "rouge n must be positive");
    const auto c = tokenize(candidate);
    const auto r = tokenize(reference);
    auto grams = [n](const std::vector<std::string>& t) {
        std::map<std::vector<std::string>, std::size_t> m;
        for (std::size_t i = 0; i + n <= t.size(); ++i) ++m[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
        return m;
    };
    const auto cg = grams(c);
    const auto rg = grams(r);
    std::size_t overlap = 0;
    for (const auto& [g, k] : cg) {
        auto it = rg.find(g);
        if (it != rg.end()) overlap += std::min(k, it->second);
    }
    const std::size_t ct = c.size() >= n ? c.size() - n + 1 : 0;
    const std::size_t rt = r.size() >= n ? r.size() - n + 1 : 0;
    return make_prf(overlap, ct, rt);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

Prf rouge_l(std::string_view candidate, std::string_view reference) {
    const auto c = tokenize(candidate);
    const auto r = tokenize(reference);
    return make_prf(lcs_length(c, r), c.size(), r.size());
}

}  // namespace totr::textgen
