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
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adaact/decode/decode.hpp"

namespace adaact::eval {

struct LabeledVideo {
  std::string video_id;
  std::vector<decode::ActionId> gt;
  std::vector<decode::ActionId> pred;
};

struct VideoMetrics {
  std::string video_id;
  std::size_t frames = 0;
  double mof = 0.0;
  std::optional<double> mof_bg;
  double iou = 0.0;
  double iod = 0.0;
};

struct Metrics {
  double mof = 0.0;
  std::optional<double> mof_bg;  // absent when every frame is background
  double iou = 0.0;
  double iod = 0.0;
  std::vector<VideoMetrics> per_video;
};

// MoF and MoF-BG pool frames over the corpus. IoU and IoD are evaluated per
// ground-truth segment, where `correct` is the set of the segment's frames
// predicted with the segment's label, and averaged over all segments.
Metrics metrics(const std::vector<LabeledVideo>& corpus, const std::set<decode::ActionId>& background);

// {"mof","mof_bg","iou","iod","per_video":[...]}; mof_bg is null when absent.
std::string metrics_json(const Metrics& m);

}  // namespace adaact::eval
