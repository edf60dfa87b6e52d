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

#include <cstdlib>
#include <string>

#include "totr/core/errors.hpp"
#include "totr/simd/kernels.hpp"

namespace totr::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(TOTR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa select_isa() noexcept {
    if (const char* forced = std::getenv("TOTR_SIMD"); forced != nullptr && std::string(forced) == "scalar") {
        return Isa::Scalar;
    }
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: return cpu_has_avx2();
        case Isa::Neon:
#if defined(TOTR_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) throw Error(Errc::InvalidArgument, std::string("ISA not available: ") + std::string(isa_name(isa)));
    switch (isa) {
#if defined(TOTR_HAVE_AVX2)
        case Isa::Avx2: return avx2::table;
#endif
#if defined(TOTR_HAVE_NEON)
        case Isa::Neon: return neon::table;
#endif
        default: return scalar::table;
    }
}

Isa active_isa() noexcept {
    static const Isa isa = select_isa();
    return isa;
}

const KernelTable& kernels() noexcept {
    static const KernelTable& table = kernels_for(active_isa());
    return table;
}

}  // namespace totr::simd
