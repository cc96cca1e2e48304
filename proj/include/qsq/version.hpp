// Copyright 2026 The QSQ Authors
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

#ifndef QSQ_VERSION_HPP_
#define QSQ_VERSION_HPP_

#include <string_view>

namespace qsq {

/// Stamped into every CLI report; reports are otherwise fully determined by
/// (subcommand, config, seed), so this is the only thing that changes across
/// releases.
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qsq

#endif  // QSQ_VERSION_HPP_
