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

#include "rappor/report_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rappor {

std::string serialize_report(const Report& report) {
  std::string line = "{\"cohort\":";
  line += std::to_string(report.cohort);
  line += ",\"bits\":\"";
  line += report.bits.to_hex();
  line += "\"}";
  return line;
}

Report parse_report(std::string_view line, const Params& params) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ReportParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cohort") || !doc.contains("bits") ||
      doc.size() != 2) {
    throw ReportParseError("report must be an object with exactly cohort and bits");
  }
  if (!doc["cohort"].is_number_unsigned() || !doc["bits"].is_string()) {
    throw ReportParseError("report fields have wrong types");
  }
  const uint64_t cohort = doc["cohort"].get<uint64_t>();
  if (cohort >= params.m) {
    throw ReportParseError("cohort " + std::to_string(cohort) + " out of range for m=" +
                           std::to_string(params.m));
  }
  Report report;
  report.cohort = static_cast<uint32_t>(cohort);
  try {
    report.bits = BitVector::from_hex(params.k, doc["bits"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ReportParseError(std::string("bad bits field: ") + e.what());
  }
  return report;
}

void write_reports_jsonl(std::ostream& out, const std::vector<Report>& reports) {
  for (const Report& report : reports) {
    out << serialize_report(report) << '\n';
  }
}

void write_reports_jsonl(const std::string& path, const std::vector<Report>& reports) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  write_reports_jsonl(out, reports);
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<Report> read_reports_jsonl(std::istream& in, const Params& params) {
  std::vector<Report> reports;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      reports.push_back(parse_report(line, params));
    } catch (const ReportParseError& e) {
      throw ReportParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return reports;
}

std::vector<Report> read_reports_jsonl(const std::string& path, const Params& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open reports file: " + path);
  }
  return read_reports_jsonl(in, params);
}

}  // namespace rappor
