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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adaact::hoi {

// Axis-aligned box [x1, y1, x2, y2] with x1 < x2 and y1 < y2.
using Box = std::array<double, 4>;

struct HoiDetection {
  long t = 0;
  Box hand_box{};
  Box obj_box{};
  double score = 0.0;
  std::vector<double> embedding;
};

// Contents of one JSON-lines detection file.
struct DetectionFile {
  std::string video_id;
  std::size_t embedding_dim = 0;
  std::vector<HoiDetection> detections;
};

DetectionFile parse_detections(std::istream& in);
DetectionFile load_detections(const std::filesystem::path& path);
void write_detections(std::ostream& out, const DetectionFile& file);
void save_detections(const std::filesystem::path& path, const DetectionFile& file);

double box_area(const Box& b);
double iou(const Box& a, const Box& b);

}  // namespace adaact::hoi
