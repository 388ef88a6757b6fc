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

#ifndef RAPPOR_DESIGN_HPP_
#define RAPPOR_DESIGN_HPP_

#include <string>
#include <vector>

#include "rappor/numerics.hpp"
#include "rappor/params.hpp"

namespace rappor {

// km x M 0/1 matrix; row (cohort j, bit i) lives at index j*k + i. Column s
// has ones at the Bloom positions of candidate s in every cohort (its single
// category bit in basic modes).
struct DesignMatrix {
  SparseMatrix X;
  std::vector<std::string> candidates;
  uint32_t k = 0;
  uint32_t m = 0;
  uint32_t h = 0;
};

// Throws on empty or duplicate candidate lists. Basic modes additionally
// require candidates.size() <= k since the candidate list doubles as the
// ordered category list.
DesignMatrix build_design_matrix(const std::vector<std::string>& candidates,
                                 const Params& params);

namespace reference {
DesignMatrix build_design_matrix(const std::vector<std::string>& candidates,
                                 const Params& params);
}  // namespace reference

}  // namespace rappor

#endif  // RAPPOR_DESIGN_HPP_
