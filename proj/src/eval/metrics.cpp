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

#include "adaact/eval/metrics.hpp"

#include <json.hpp>

#include "adaact/errors.hpp"

namespace adaact::eval {
namespace {

struct Counts {
  double frames = 0, correct = 0;
  double fg_frames = 0, fg_correct = 0;
  double iou_sum = 0, iod_sum = 0, segments = 0;
};

Counts count(const LabeledVideo& v, const std::set<decode::ActionId>& background) {
  if (v.gt.size() != v.pred.size()) {
    throw ValidationError("video " + v.video_id + ": " + std::to_string(v.gt.size()) + " ground-truth vs " +
                          std::to_string(v.pred.size()) + " predicted frames");
  }
  if (v.gt.empty()) throw ValidationError("video " + v.video_id + " has no frames");
  Counts c;
  for (std::size_t t = 0; t < v.gt.size(); ++t) {
    const bool ok = v.gt[t] == v.pred[t];
    c.frames += 1;
    c.correct += ok;
    if (!background.count(v.gt[t])) {
      c.fg_frames += 1;
      c.fg_correct += ok;
    }
  }
  std::size_t begin = 0;
  for (const auto& seg : decode::Segmentation::from_frame_labels(v.gt).segments) {
    double intersection = 0;
    for (std::size_t t = begin; t < begin + seg.length; ++t) intersection += v.pred[t] == seg.action;
    const double gt = static_cast<double>(seg.length);
    // correct lies inside the segment, so the union is the segment itself.
    const double uni = gt;
    c.iou_sum += intersection / uni;
    c.iod_sum += intersection / gt;
    c.segments += 1;
    begin += seg.length;
  }
  return c;
}

}  // namespace

Metrics metrics(const std::vector<LabeledVideo>& corpus, const std::set<decode::ActionId>& background) {
  if (corpus.empty()) throw ValidationError("metrics: empty corpus");
  Counts total;
  Metrics m;
  for (const auto& v : corpus) {
    Counts c = count(v, background);
    VideoMetrics vm;
    vm.video_id = v.video_id;
    vm.frames = v.gt.size();
    vm.mof = c.correct / c.frames;
    if (c.fg_frames > 0) vm.mof_bg = c.fg_correct / c.fg_frames;
    vm.iou = c.iou_sum / c.segments;
    vm.iod = c.iod_sum / c.segments;
    m.per_video.push_back(std::move(vm));

    total.frames += c.frames;
    total.correct += c.correct;
    total.fg_frames += c.fg_frames;
    total.fg_correct += c.fg_correct;
    total.iou_sum += c.iou_sum;
    total.iod_sum += c.iod_sum;
    total.segments += c.segments;
  }
  m.mof = total.correct / total.frames;
  if (total.fg_frames > 0) m.mof_bg = total.fg_correct / total.fg_frames;
  m.iou = total.iou_sum / total.segments;
  m.iod = total.iod_sum / total.segments;
  return m;
}

std::string metrics_json(const Metrics& m) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json per = json::array();
  for (const auto& v : m.per_video) {
    per.push_back({{"video_id", v.video_id},
                   {"frames", v.frames},
                   {"mof", v.mof},
                   {"mof_bg", opt(v.mof_bg)},
                   {"iou", v.iou},
                   {"iod", v.iod}});
  }
  json j = {{"mof", m.mof}, {"mof_bg", opt(m.mof_bg)}, {"iou", m.iou}, {"iod", m.iod}, {"per_video", per}};
  return j.dump(2);
}

}  // namespace adaact::eval
