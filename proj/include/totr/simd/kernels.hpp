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

// Dot-product kernels used by search, mining, and the adapter math.
//
// Every kernel has a scalar reference implementation and, where the build
// target supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The
// variant is picked once at first use from the CPU's reported features;
// TOTR_SIMD=scalar in the environment forces the reference path.
//
// f32 inputs accumulate in f64: products of two floats are exact in double,
// so the variants differ from the reference only by summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace totr::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    double (*dot_f32)(const float* a, const float* b, std::size_t n);
    double (*dot_f64)(const double* a, const double* b, std::size_t n);
    // out[r] = dot(rows + r*dim, q) for r in [0, n_rows)
    void (*dot_rows_f32)(const float* rows, std::size_t n_rows, std::size_t dim, const float* q, double* out);
    // y += alpha * x
    void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
};

bool isa_available(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// Table for a specific ISA. Throws Error(InvalidArgument) when unavailable.
const KernelTable& kernels_for(Isa isa);

Isa active_isa() noexcept;
const KernelTable& kernels() noexcept;

namespace scalar {
extern const KernelTable table;
}
#if defined(TOTR_HAVE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif
#if defined(TOTR_HAVE_NEON)
namespace neon {
extern const KernelTable table;
}
#endif

inline double dot(std::span<const float> a, std::span<const float> b) noexcept {
    return kernels().dot_f32(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return kernels().dot_f64(a.data(), b.data(), a.size());
}

}  // namespace totr::simd
