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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "totr/core/errors.hpp"
#include "totr/embedding.hpp"

namespace totr::embedding {
namespace {

constexpr char kMagic[4] = {'T', '2', 'M', 'E'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8;

template <typename T>
void put_le(std::string& out, T value) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

}  // namespace

void save_store(const EmbeddingMatrix& m, const std::filesystem::path& path) {
    std::string out;
    out.reserve(kHeaderBytes + m.data().size() * 4);
    out.append(kMagic, 4);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.dim()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    for (float f : m.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
    for (const auto& id : m.ids()) {
        if (id.find('\n') != std::string::npos) throw Error(Errc::InvalidArgument, "id contains a newline: " + id);
        out += id;
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error(Errc::Io, "short write to " + path.string());
}

EmbeddingMatrix load_store(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(Errc::Malformed, path.string() + ": missing T2ME magic");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const auto dim = get_le<std::uint32_t>(p + 4);
    const auto count = get_le<std::uint64_t>(p + 8);
    const std::uint64_t payload = count * dim * 4;
    if (dim == 0 && count > 0) throw Error(Errc::Malformed, path.string() + ": zero dim");
    if (bytes.size() - kHeaderBytes < payload) throw Error(Errc::Malformed, path.string() + ": truncated vector block");

    std::vector<std::string> ids;
    std::size_t pos = kHeaderBytes + payload;
    while (pos < bytes.size()) {
        const std::size_t nl = bytes.find('\n', pos);
        if (nl == std::string::npos) throw Error(Errc::Malformed, path.string() + ": unterminated id line");
        ids.push_back(bytes.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (ids.size() != count) {
        throw Error(Errc::Malformed, path.string() + ": " + std::to_string(ids.size()) + " ids for " + std::to_string(count) + " rows");
    }

    EmbeddingMatrix m(dim);
    std::vector<float> row(dim);
    bool unit = true;
    for (std::uint64_t r = 0; r < count; ++r) {
        for (std::uint32_t c = 0; c < dim; ++c) {
            row[c] = std::bit_cast<float>(get_le<std::uint32_t>(p + kHeaderBytes + (r * dim + c) * 4));
        }
        const double norm = l2_norm(row);
        unit = unit && std::abs(norm - 1.0) <= 1e-5;
        m.add_row(std::move(ids[r]), row);
    }
    m.set_normalized(unit && count > 0);
    return m;
}

}  // namespace totr::embedding
