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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "totr/simd/kernels.hpp"

using namespace totr;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

void check_equivalent(const simd::KernelTable& ref, const simd::KernelTable& alt) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n = 0; n <= 67; ++n) {
        std::vector<float> a(n), b(n);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<float>(g(rng));
            b[i] = static_cast<float>(g(rng));
            x[i] = g(rng);
            y[i] = g(rng);
        }
        CHECK(rel(ref.dot_f32(a.data(), b.data(), n), alt.dot_f32(a.data(), b.data(), n)) < 1e-12);
        CHECK(rel(ref.dot_f64(x.data(), y.data(), n), alt.dot_f64(x.data(), y.data(), n)) < 1e-12);

        std::vector<double> y1 = y, y2 = y;
        ref.axpy_f64(0.37, x.data(), y1.data(), n);
        alt.axpy_f64(0.37, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(rel(y1[i], y2[i]) < 1e-15);
    }
    for (std::size_t dim : {1, 7, 8, 32, 33, 100}) {
        const std::size_t rows = 13;
        std::vector<float> m(rows * dim), q(dim);
        for (auto& v : m) v = static_cast<float>(g(rng));
        for (auto& v : q) v = static_cast<float>(g(rng));
        std::vector<double> o1(rows), o2(rows);
        ref.dot_rows_f32(m.data(), rows, dim, q.data(), o1.data());
        alt.dot_rows_f32(m.data(), rows, dim, q.data(), o2.data());
        for (std::size_t r = 0; r < rows; ++r) {
            CHECK(rel(o1[r], o2[r]) < 1e-12);
            CHECK(rel(o1[r], ref.dot_f32(m.data() + r * dim, q.data(), dim)) < 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("scalar reference against hand values") {
    const auto& k = simd::scalar::table;
    const float a[] = {1, 2, 3};
    const float b[] = {4, -5, 6};
    CHECK(k.dot_f32(a, b, 3) == 12.0);
    CHECK(k.dot_f32(a, b, 0) == 0.0);
    double y[] = {1, 1, 1};
    const double x[] = {1, 2, 3};
    k.axpy_f64(2.0, x, y, 3);
    CHECK(y[0] == 3.0);
    CHECK(y[2] == 7.0);
}

TEST_CASE("f32 products accumulate in double") {
    // 1e8 + 1 - 1e8 vanishes in float accumulation
    const float a[] = {1e8f, 1.0f, -1e8f};
    const float b[] = {1.0f, 1.0f, 1.0f};
    CHECK(simd::scalar::table.dot_f32(a, b, 3) == 1.0);
    CHECK(simd::kernels().dot_f32(a, b, 3) == 1.0);
}

#if defined(TOTR_HAVE_AVX2)
TEST_CASE("avx2 kernels match the scalar reference") {
    if (!simd::isa_available(simd::Isa::Avx2)) {
        MESSAGE("CPU lacks AVX2+FMA; skipped");
        return;
    }
    check_equivalent(simd::scalar::table, simd::avx2::table);
}
#endif

#if defined(TOTR_HAVE_NEON)
TEST_CASE("neon kernels match the scalar reference") { check_equivalent(simd::scalar::table, simd::neon::table); }
#endif

TEST_CASE("dispatch") {
    CHECK(simd::isa_available(simd::Isa::Scalar));
    CHECK(simd::isa_available(simd::active_isa()));
    CHECK(&simd::kernels_for(simd::Isa::Scalar) == &simd::scalar::table);
    CHECK_FALSE(simd::isa_name(simd::active_isa()).empty());
}
