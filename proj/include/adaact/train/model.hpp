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
#include <span>
#include <vector>

#include "adaact/data/corpus.hpp"
#include "adaact/decode/decode.hpp"
#include "adaact/encoder/encoder.hpp"
#include "adaact/hoi/integrator.hpp"
#include "adaact/hypernet/hypernet.hpp"
#include "adaact/train/config.hpp"

namespace adaact::train {

struct ModelDims {
  std::size_t feature_dim = 0;    // F
  std::size_t embedding_dim = 0;  // E
  std::size_t num_actions = 0;    // A
};

// HOI integrator, HyperNetwork and GRU of the adaptive temporal encoder.
struct AdaActModel {
  ModelDims dims;
  hoi::IntegratorParams integrator;
  hypernet::HyperNetwork hyper;
  encoder::GruParams gru;

  static AdaActModel init(const TrainConfig& cfg, const ModelDims& dims);
  std::vector<NamedTensor> named_parameters() const;
  // Parameters that receive gradients under cfg's ablation switches.
  std::vector<num::Tensor> trainable_parameters(const TrainConfig& cfg) const;
};

// Model plus the decoding statistics re-estimated during training.
struct ModelState {
  AdaActModel model;
  std::vector<double> prior;
  decode::LengthModel lengths;
  decode::Grammar grammar;
  std::size_t epoch = 0;  // completed epochs
};

struct VideoOutput {
  num::Tensor s;  // HOI-dependent knowledge (zeros when use_hoi is off)
  hypernet::GeneratedHead head;
  num::Tensor log_posteriors;  // T x A
  num::Tensor scores;          // T x A, log p(a|x_t) - log p(a)
};

VideoOutput forward_video(const AdaActModel& model, const data::Video& video, const TrainConfig& cfg,
                          std::span<const double> prior);

// Scores as a plain matrix, evaluated without recording gradients.
Matrix video_scores(const ModelState& state, const data::Video& video, const TrainConfig& cfg);

decode::DecodeOptions decode_options(const TrainConfig& cfg);
hoi::NmsConfig nms_config(const TrainConfig& cfg);

}  // namespace adaact::train
