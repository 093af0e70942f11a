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

#include "adaact/hoi/video_nms.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "adaact/errors.hpp"

namespace adaact::hoi {

std::vector<HoiDetection> filter_by_score(const std::vector<HoiDetection>& dets, double threshold) {
  std::vector<HoiDetection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [threshold](const HoiDetection& d) { return d.score >= threshold; });
  return out;
}

HoiSelection video_nms(const std::vector<HoiDetection>& dets, double iou_thresh, long time_gap, std::size_t k) {
  if (!(iou_thresh > 0.0 && iou_thresh < 1.0)) throw ConfigError("video_nms: iou_thresh must lie in (0,1)");
  if (k == 0) throw ConfigError("video_nms: K must be at least 1");

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    return dets[a].t < dets[b].t;
  });

  std::vector<bool> suppressed(dets.size(), false);
  HoiSelection sel;
  for (std::size_t pos = 0; pos < order.size() && sel.items.size() < k; ++pos) {
    const std::size_t i = order[pos];
    if (suppressed[i]) continue;
    sel.items.push_back(dets[i]);
    for (std::size_t rest = pos + 1; rest < order.size(); ++rest) {
      const std::size_t j = order[rest];
      if (suppressed[j]) continue;
      if (iou(dets[i].obj_box, dets[j].obj_box) > iou_thresh && std::labs(dets[i].t - dets[j].t) < time_gap) {
        suppressed[j] = true;
      }
    }
  }
  std::stable_sort(sel.items.begin(), sel.items.end(), [](const HoiDetection& a, const HoiDetection& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.score > b.score;
  });
  return sel;
}

HoiSelection select_interactions(const std::vector<HoiDetection>& dets, const NmsConfig& cfg) {
  return video_nms(filter_by_score(dets, cfg.detection_threshold), cfg.iou_thresh, cfg.time_gap, cfg.top_k);
}

}  // namespace adaact::hoi
