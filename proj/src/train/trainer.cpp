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

#include "adaact/train/trainer.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "adaact/errors.hpp"
#include "adaact/train/loss.hpp"

namespace adaact::train {

ModelDims corpus_dims(const data::Corpus& corpus) {
  return {corpus.feature_dim(), corpus.embedding_dim, corpus.actions.size()};
}

ModelState initial_state(const data::Corpus& corpus, const TrainConfig& cfg) {
  if (corpus.videos.empty()) throw ValidationError("training corpus is empty");
  ModelState state;
  state.model = AdaActModel::init(cfg, corpus_dims(corpus));
  const std::size_t a = corpus.actions.size();
  state.prior.assign(a, 1.0 / static_cast<double>(a));

  double frames = 0.0, segments = 0.0;
  std::vector<decode::Transcript> distinct;
  for (const auto& v : corpus.videos) {
    if (v.transcript.size() == 0) throw ValidationError("video '" + v.id + "' has an empty transcript");
    frames += static_cast<double>(v.features.rows);
    segments += static_cast<double>(v.transcript.size());
    if (std::find(distinct.begin(), distinct.end(), v.transcript) == distinct.end()) distinct.push_back(v.transcript);
  }
  state.lengths.lambda.assign(a, frames / segments);
  state.grammar = decode::Grammar::uniform(std::move(distinct));
  return state;
}

void reestimate(ModelState& state, const data::Corpus& corpus, const TrainConfig& cfg) {
  std::vector<decode::Segmentation> labels;
  labels.reserve(corpus.videos.size());
  for (const auto& v : corpus.videos) {
    try {
      labels.push_back(align_video(state, v, v.transcript, cfg).segmentation);
    } catch (const InfeasibleError&) {
    }
  }
  if (labels.empty()) return;
  auto est = decode::estimate_models(labels, corpus.actions.size(), cfg.prior_alpha);
  state.prior = std::move(est.prior);
  state.lengths = std::move(est.lengths);
  state.grammar = std::move(est.grammar);
}

EpochReport train_epoch(ModelState& state, const data::Corpus& corpus, const TrainConfig& cfg) {
  std::vector<std::size_t> order(corpus.videos.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed * 1000003ULL + state.epoch);
  std::shuffle(order.begin(), order.end(), rng);

  auto params = state.model.trainable_parameters(cfg);
  const auto opts = decode_options(cfg);
  const std::size_t num_actions = corpus.actions.size();
  EpochReport report;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i : order) {
    const auto& video = corpus.videos[i];
    for (auto& p : params) p.zero_grad();
    VideoOutput out = forward_video(state.model, video, cfg, state.prior);
    std::optional<num::Tensor> loss;
    if (cfg.loss_mode == LossMode::kDiscriminative) {
      auto competitors = competitor_grammar(state.grammar, video.transcript, num_actions, cfg.competitors);
      loss = discriminative_loss(out.scores, video.transcript, competitors, state.lengths, opts);
    } else {
      loss = pseudo_label_loss(out.log_posteriors, out.scores, video.transcript, state.lengths, opts);
    }
    if (!loss) {
      ++report.skipped;
      continue;
    }
    total += loss->item();
    ++used;
    // Step on the per-frame loss so the step size does not grow with T.
    num::backward(num::scale(*loss, 1.0 / static_cast<double>(video.features.rows)));
    num::sgd_step(params, cfg.lr);
  }
  ++state.epoch;
  report.epoch = state.epoch;
  report.mean_loss = used ? total / static_cast<double>(used) : 0.0;
  if (cfg.reestimate_every > 0 && state.epoch % cfg.reestimate_every == 0) reestimate(state, corpus, cfg);
  return report;
}

decode::SegmentResult segment_video(const ModelState& state, const data::Video& video, const TrainConfig& cfg) {
  return decode::segment(video_scores(state, video, cfg), state.grammar, state.lengths, decode_options(cfg));
}

decode::Alignment align_video(const ModelState& state, const data::Video& video, const decode::Transcript& tr,
                              const TrainConfig& cfg) {
  return decode::align(video_scores(state, video, cfg), tr, state.lengths, decode_options(cfg));
}

}  // namespace adaact::train
