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

namespace totr {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Malformed: return "Malformed";
        case Errc::MissingMetadata: return "MissingMetadata";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::DimMismatch: return "DimMismatch";
        case Errc::ZeroVector: return "ZeroVector";
        case Errc::EmptyIndex: return "EmptyIndex";
        case Errc::NumericalError: return "NumericalError";
        case Errc::Unavailable: return "Unavailable";
        case Errc::NotFound: return "NotFound";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace totr
