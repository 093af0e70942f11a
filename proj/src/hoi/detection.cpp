/* Copyright 2026 The AdaAct Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "adaact/hoi/detection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "adaact/errors.hpp"

namespace adaact::hoi {
namespace {

using nlohmann::json;

Box parse_box(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4) {
    throw ParseError(line, std::string("'") + key + "' must be an array of 4 numbers");
  }
  Box b{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[key][i].is_number()) throw ParseError(line, std::string("'") + key + "' holds a non-number");
    b[i] = j[key][i].get<double>();
  }
  if (!(b[0] < b[2] && b[1] < b[3])) {
    throw ValidationError("line " + std::to_string(line) + ": '" + key + "' has non-positive area");
  }
  return b;
}

json box_json(const Box& b) { return json::array({b[0], b[1], b[2], b[3]}); }

}  // namespace

DetectionFile parse_detections(std::istream& in) {
  DetectionFile file;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line, "expected a JSON object");

    if (!have_header) {
      if (!j.contains("version") || j["version"] != 1) throw ParseError(line, "header must declare version 1");
      if (!j.contains("embedding_dim") || !j["embedding_dim"].is_number_unsigned()) {
        throw ParseError(line, "header needs a non-negative integer 'embedding_dim'");
      }
      if (!j.contains("video_id") || !j["video_id"].is_string()) throw ParseError(line, "header needs 'video_id'");
      file.embedding_dim = j["embedding_dim"].get<std::size_t>();
      file.video_id = j["video_id"].get<std::string>();
      have_header = true;
      continue;
    }

    HoiDetection d;
    if (!j.contains("t") || !j["t"].is_number_integer() || j["t"].get<long>() < 0) {
      throw ParseError(line, "'t' must be a non-negative integer");
    }
    d.t = j["t"].get<long>();
    d.hand_box = parse_box(j, "hand_box", line);
    d.obj_box = parse_box(j, "obj_box", line);
    if (!j.contains("score") || !j["score"].is_number()) throw ParseError(line, "'score' must be a number");
    d.score = j["score"].get<double>();
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw ValidationError("line " + std::to_string(line) + ": score " + std::to_string(d.score) + " outside [0,1]");
    }
    if (!j.contains("embedding") || !j["embedding"].is_array()) throw ParseError(line, "'embedding' must be an array");
    for (const auto& v : j["embedding"]) {
      if (!v.is_number()) throw ParseError(line, "'embedding' holds a non-number");
      d.embedding.push_back(v.get<double>());
    }
    if (d.embedding.size() != file.embedding_dim) {
      throw FormatError("line " + std::to_string(line) + ": embedding has " + std::to_string(d.embedding.size()) +
                        " values, header declares " + std::to_string(file.embedding_dim));
    }
    file.detections.push_back(std::move(d));
  }
  if (!have_header) throw ParseError(line, "missing header line");
  return file;
}

DetectionFile load_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open detection file " + path.string());
  return parse_detections(in);
}

void write_detections(std::ostream& out, const DetectionFile& file) {
  json header = {{"version", 1}, {"embedding_dim", file.embedding_dim}, {"video_id", file.video_id}};
  out << header.dump() << '\n';
  for (const auto& d : file.detections) {
    json j = {{"t", d.t},
              {"hand_box", box_json(d.hand_box)},
              {"obj_box", box_json(d.obj_box)},
              {"score", d.score},
              {"embedding", d.embedding}};
    out << j.dump() << '\n';
  }
}

void save_detections(const std::filesystem::path& path, const DetectionFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write detection file " + path.string());
  write_detections(out, file);
}

double box_area(const Box& b) { return std::max(0.0, b[2] - b[0]) * std::max(0.0, b[3] - b[1]); }

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a[2], b[2]) - std::max(a[0], b[0]);
  const double ih = std::min(a[3], b[3]) - std::max(a[1], b[1]);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (box_area(a) + box_area(b) - inter);
}

}  // namespace adaact::hoi
