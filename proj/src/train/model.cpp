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

#include "adaact/train/model.hpp"

#include <algorithm>
#include <random>

#include "adaact/errors.hpp"
#include "adaact/hoi/video_nms.hpp"

namespace adaact::train {

AdaActModel AdaActModel::init(const TrainConfig& cfg, const ModelDims& dims) {
  cfg.validate();
  if (dims.feature_dim == 0 || dims.num_actions == 0) throw ConfigError("model: empty feature or action set");
  std::mt19937_64 rng(cfg.seed);
  AdaActModel m;
  m.dims = dims;

  hoi::IntegratorConfig ic;
  ic.embedding_dim = std::max<std::size_t>(1, dims.embedding_dim);
  ic.model_dim = cfg.model_dim;
  ic.output_dim = cfg.knowledge_dim;
  ic.layers = cfg.integrator_layers;
  ic.heads = cfg.attention_heads;
  ic.mlp_dim = cfg.mlp_dim;
  ic.max_items = cfg.top_k;
  m.integrator = hoi::IntegratorParams::init(ic, rng);

  hypernet::HyperNetConfig hc;
  hc.knowledge_dim = cfg.knowledge_dim;
  hc.heads = cfg.heads;
  hc.hidden = cfg.hyper_hidden;
  hc.out_channels = cfg.out_channels;
  hc.num_actions = dims.num_actions;
  hc.use_independent = cfg.use_independent;
  m.hyper = hypernet::HyperNetwork::init(hc, rng);

  m.gru = encoder::GruParams::init(dims.feature_dim, cfg.out_channels, rng);
  return m;
}

std::vector<NamedTensor> AdaActModel::named_parameters() const {
  auto out = integrator.named_parameters();
  for (auto&& part : {hyper.named_parameters(), gru.named_parameters()}) out.insert(out.end(), part.begin(), part.end());
  return out;
}

std::vector<num::Tensor> AdaActModel::trainable_parameters(const TrainConfig& cfg) const {
  std::vector<num::Tensor> out;
  for (const auto& [name, t] : named_parameters()) {
    if (!cfg.use_hoi && name.starts_with("integrator.")) continue;
    if (!cfg.use_independent &&
        (name == "hypernet.z" || name.starts_with("hypernet.weight_independent.") ||
         name.starts_with("hypernet.bias_independent."))) {
      continue;
    }
    out.push_back(t);
  }
  return out;
}

decode::DecodeOptions decode_options(const TrainConfig& cfg) { return {cfg.max_segment_length}; }

hoi::NmsConfig nms_config(const TrainConfig& cfg) {
  return {cfg.detection_threshold, cfg.iou_thresh, cfg.time_gap, cfg.top_k};
}

VideoOutput forward_video(const AdaActModel& model, const data::Video& video, const TrainConfig& cfg,
                          std::span<const double> prior) {
  VideoOutput out;
  if (cfg.use_hoi) {
    out.s = hoi::integrate(hoi::select_interactions(video.detections, nms_config(cfg)), model.integrator);
  } else {
    out.s = num::Tensor::zeros({cfg.knowledge_dim});
  }
  out.head = hypernet::generate_head(model.hyper, out.s);
  out.log_posteriors = encoder::log_posteriors(video.features, out.head, model.gru, cfg.window);
  out.scores = encoder::class_scores(out.log_posteriors, prior, cfg.prior_floor);
  return out;
}

Matrix video_scores(const ModelState& state, const data::Video& video, const TrainConfig& cfg) {
  num::NoGradGuard no_grad;
  VideoOutput out = forward_video(state.model, video, cfg, state.prior);
  return Matrix(out.scores.rows(), out.scores.cols(),
                std::vector<double>(out.scores.values().begin(), out.scores.values().end()));
}

}  // namespace adaact::train
