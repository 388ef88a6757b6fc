// Copyright 2026 The Rappor Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rappor/design.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "rappor/hashing.hpp"

namespace rappor {

namespace {

void check_candidates(const std::vector<std::string>& candidates, const Params& params) {
  if (candidates.empty()) {
    throw std::invalid_argument("build_design_matrix: empty candidate list");
  }
  std::unordered_set<std::string_view> seen;
  for (const std::string& c : candidates) {
    if (!seen.insert(c).second) {
      throw std::invalid_argument("build_design_matrix: duplicate candidate: " + c);
    }
  }
  if (is_basic(params.mode) && candidates.size() > params.k) {
    throw std::invalid_argument("build_design_matrix: more candidates than bits in basic mode");
  }
}

std::vector<uint32_t> column_rows(const std::string& candidate, size_t index,
                                  const Params& params) {
  std::vector<uint32_t> rows;
  if (is_basic(params.mode)) {
    rows.push_back(static_cast<uint32_t>(index));
    return rows;
  }
  rows.reserve(static_cast<size_t>(params.m) * params.h);
  std::vector<uint32_t> bits;
  for (uint32_t j = 0; j < params.m; ++j) {
    bits = bloom_bit_indices(candidate, j, params.k, params.h);
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    for (const uint32_t i : bits) {
      rows.push_back(j * params.k + i);
    }
  }
  return rows;
}

DesignMatrix make_shell(const std::vector<std::string>& candidates, const Params& params) {
  DesignMatrix design;
  design.candidates = candidates;
  design.k = params.k;
  design.m = params.m;
  design.h = params.h;
  design.X.rows = static_cast<size_t>(params.k) * params.m;
  design.X.columns.resize(candidates.size());
  return design;
}

}  // namespace

namespace reference {

DesignMatrix build_design_matrix(const std::vector<std::string>& candidates,
                                 const Params& params) {
  validate_or_throw(params);
  check_candidates(candidates, params);
  DesignMatrix design = make_shell(candidates, params);
  for (size_t s = 0; s < candidates.size(); ++s) {
    design.X.columns[s] = column_rows(candidates[s], s, params);
  }
  return design;
}

}  // namespace reference

DesignMatrix build_design_matrix(const std::vector<std::string>& candidates,
                                 const Params& params) {
  validate_or_throw(params);
  check_candidates(candidates, params);
  DesignMatrix design = make_shell(candidates, params);
  const int64_t n = static_cast<int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t s = 0; s < n; ++s) {
    design.X.columns[static_cast<size_t>(s)] =
        column_rows(candidates[static_cast<size_t>(s)], static_cast<size_t>(s), params);
  }
  return design;
}

}  // namespace rappor
