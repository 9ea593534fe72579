// Copyright 2026 The iacsmell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "iacsmell/parsers.hpp"

namespace iacsmell::parsers::detail {

// Appends a region, merging it into the previous one when they touch so the
// report stays disjoint and ascending.
inline void add_skipped(std::vector<SkippedRegion>& regions, int first, int last,
                        std::string reason) {
  if (last < first) last = first;
  if (!regions.empty() && first <= regions.back().last_line) {
    auto& prev = regions.back();
    if (last > prev.last_line) prev.last_line = last;
    if (prev.reason.find(reason) == std::string::npos) prev.reason += "; " + reason;
    return;
  }
  regions.push_back({first, last, std::move(reason)});
}

}  // namespace iacsmell::parsers::detail
