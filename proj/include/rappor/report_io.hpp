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

#ifndef RAPPOR_REPORT_IO_HPP_
#define RAPPOR_REPORT_IO_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rappor/client.hpp"
#include "rappor/params.hpp"

namespace rappor {

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One JSON object, no trailing newline: {"cohort":2,"bits":"09"}
// Bit i of the report lives in hex byte floor(i/8) at bit (i mod 8) counting
// from the least-significant bit. Bit-exact; the decoder depends on it.
std::string serialize_report(const Report& report);

// Validates bits length against k and cohort against m.
Report parse_report(std::string_view line, const Params& params);

void write_reports_jsonl(std::ostream& out, const std::vector<Report>& reports);
void write_reports_jsonl(const std::string& path, const std::vector<Report>& reports);

// Skips blank lines; error messages carry the 1-based line number.
std::vector<Report> read_reports_jsonl(std::istream& in, const Params& params);
std::vector<Report> read_reports_jsonl(const std::string& path, const Params& params);

}  // namespace rappor

#endif  // RAPPOR_REPORT_IO_HPP_
