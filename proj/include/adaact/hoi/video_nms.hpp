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

#include <cstddef>
#include <vector>

#include "adaact/hoi/detection.hpp"

namespace adaact::hoi {

struct NmsConfig {
  double detection_threshold = 0.5;
  double iou_thresh = 0.5;
  long time_gap = 30;  // frames
  std::size_t top_k = 10;
};

// At most K detections, ascending by t (ties: descending score).
struct HoiSelection {
  std::vector<HoiDetection> items;
};

std::vector<HoiDetection> filter_by_score(const std::vector<HoiDetection>& dets, double threshold);

// Greedy selection: repeatedly keep the highest-scoring remaining detection
// (equal scores: earlier t first) and drop every remaining detection whose
// obj_box IoU with it exceeds iou_thresh while also lying fewer than
// time_gap frames away. Stops after K keeps.
HoiSelection video_nms(const std::vector<HoiDetection>& dets, double iou_thresh, long time_gap, std::size_t k);

// filter_by_score followed by video_nms.
HoiSelection select_interactions(const std::vector<HoiDetection>& dets, const NmsConfig& cfg);

}  // namespace adaact::hoi
