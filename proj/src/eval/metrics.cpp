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

#include "totr/core/errors.hpp"
#include "totr/retrieval_eval.hpp"

namespace totr::eval {

double recall_at_k(std::span<const Rank> ranks, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (ranks.empty()) return 0.0;
    std::size_t hits = 0;
    for (const Rank& r : ranks) {
        if (r && *r == 0) throw Error(Errc::InvalidArgument, "ranks are 1-based");
        if (r && *r <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mrr_at_k(std::span<const Rank> ranks, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (ranks.empty()) return 0.0;
    double sum = 0.0;
    for (const Rank& r : ranks) {
        if (r && *r == 0) throw Error(Errc::InvalidArgument, "ranks are 1-based");
        if (r && *r <= k) sum += 1.0 / static_cast<double>(*r);
    }
    return sum / static_cast<double>(ranks.size());
}

}  // namespace totr::eval
