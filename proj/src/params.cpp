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

#include "rappor/params.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rappor {

namespace {

constexpr uint32_t kMaxBits = 4096;
constexpr uint32_t kMaxCohorts = 65536;  // cohort is a 2-byte tag in the hash input
constexpr uint32_t kMaxHashes = 255;     // hash index is a 1-byte tag

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kStandard:
      return "standard";
    case Mode::kOneTime:
      return "one_time";
    case Mode::kBasic:
      return "basic";
    case Mode::kBasicOneTime:
      return "basic_one_time";
  }
  return "?";
}

Mode mode_from_name(std::string_view name) {
  if (name == "standard") return Mode::kStandard;
  if (name == "one_time") return Mode::kOneTime;
  if (name == "basic") return Mode::kBasic;
  if (name == "basic_one_time") return Mode::kBasicOneTime;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

std::vector<std::string> validate(const Params& params) {
  std::vector<std::string> errors;
  if (params.k < 1 || params.k > kMaxBits) {
    errors.push_back("1 <= k <= 4096 violated");
  }
  if (params.h < 1 || params.h > params.k) {
    errors.push_back("1 <= h <= k violated");
  }
  if (params.h > kMaxHashes) {
    errors.push_back("h <= 255 violated");
  }
  if (!in_unit(params.f)) {
    errors.push_back("f in [0,1] violated");
  }
  if (!in_unit(params.p)) {
    errors.push_back("p in [0,1] violated");
  }
  if (!in_unit(params.q)) {
    errors.push_back("q in [0,1] violated");
  }
  if (!(params.p < params.q)) {
    errors.push_back("p < q violated");
  }
  if (params.m < 1 || params.m > kMaxCohorts) {
    errors.push_back("1 <= m <= 65536 violated");
  }
  if (is_basic(params.mode) && (params.h != 1 || params.m != 1)) {
    errors.push_back("basic modes require h = 1 and m = 1");
  }
  return errors;
}

void validate_or_throw(const Params& params) {
  const auto errors = validate(params);
  if (errors.empty()) return;
  std::string joined;
  for (const auto& e : errors) {
    if (!joined.empty()) joined += "; ";
    joined += e;
  }
  throw std::invalid_argument("invalid params: " + joined);
}

void validate_for_decoding(const Params& params) {
  validate_or_throw(params);
  if (params.f >= 1.0) {
    throw std::invalid_argument(
        "params not decodable: f = 1 leaves no signal ((1-f)(q-p) = 0)");
  }
}

ResponseProbabilities response_probabilities(double f, double p, double q) {
  if (!in_unit(f) || !in_unit(p) || !in_unit(q)) {
    throw std::invalid_argument("response_probabilities: f,p,q must be in [0,1]");
  }
  const double mix = 0.5 * f * (p + q);
  return {mix + (1.0 - f) * q, mix + (1.0 - f) * p};
}

double epsilon_infinity(uint32_t h, double f) {
  if (f < 0.0 || f > 1.0) {
    throw std::invalid_argument("epsilon_infinity: f must be in [0,1]");
  }
  if (h < 1) {
    throw std::invalid_argument("epsilon_infinity: h must be >= 1");
  }
  if (f == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * h * std::log((1.0 - 0.5 * f) / (0.5 * f));
}

double epsilon_one(uint32_t h, double f, double p, double q) {
  const auto [q_star, p_star] = response_probabilities(f, p, q);
  if (p_star <= 0.0 || p_star >= 1.0 || q_star <= 0.0 || q_star >= 1.0) {
    throw std::domain_error(
        "epsilon_one: degenerate response probabilities (q* or p* in {0,1})");
  }
  return h * std::log(q_star * (1.0 - p_star) / (p_star * (1.0 - q_star)));
}

PrivacyReport privacy_report(const Params& params) {
  validate_or_throw(params);
  const auto probs = response_probabilities(params.f, params.p, params.q);
  PrivacyReport report;
  report.q_star = probs.q_star;
  report.p_star = probs.p_star;
  report.eps_infinity = epsilon_infinity(params.h, params.f);
  report.eps_one = epsilon_one(params.h, params.f, params.p, params.q);
  return report;
}

Params params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("params: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("params: expected a JSON object");
  }
  static const char* kFields[] = {"k", "h", "f", "p", "q", "m", "mode"};
  for (const char* field : kFields) {
    if (!j.contains(field)) {
      throw std::invalid_argument(std::string("params: missing field ") + field);
    }
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* field : kFields) known |= (key == field);
    if (!known) {
      throw std::invalid_argument("params: unknown field " + key);
    }
  }
  auto read_uint = [&](const char* field) -> uint32_t {
    const auto& v = j.at(field);
    if (!v.is_number_integer() || v.get<int64_t>() < 0 ||
        v.get<int64_t>() > std::numeric_limits<uint32_t>::max()) {
      throw std::invalid_argument(std::string("params: field ") + field +
                                  " must be a non-negative integer");
    }
    return v.get<uint32_t>();
  };
  auto read_prob = [&](const char* field) -> double {
    const auto& v = j.at(field);
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("params: field ") + field +
                                  " must be a number");
    }
    return v.get<double>();
  };
  if (!j.at("mode").is_string()) {
    throw std::invalid_argument("params: field mode must be a string");
  }
  Params params;
  params.k = read_uint("k");
  params.h = read_uint("h");
  params.f = read_prob("f");
  params.p = read_prob("p");
  params.q = read_prob("q");
  params.m = read_uint("m");
  params.mode = mode_from_name(j.at("mode").get<std::string>());
  return params;
}

std::string params_to_json(const Params& params) {
  nlohmann::json j;
  j["k"] = params.k;
  j["h"] = params.h;
  j["f"] = params.f;
  j["p"] = params.p;
  j["q"] = params.q;
  j["m"] = params.m;
  j["mode"] = std::string(mode_name(params.mode));
  return j.dump();
}

Params load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("params: cannot open " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

}  // namespace rappor
