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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adaact::train {

enum class LossMode { kDiscriminative, kPseudoLabel };

// Which competing transcripts the discriminative loss normalizes over.
enum class Competitors {
  kGrammar,  // the training grammar only
  kEdits,    // the grammar plus every single-action substitution of the target
};

struct TrainConfig {
  double lr = 0.01;
  std::size_t epochs = 2000;
  std::size_t top_k = 10;            // K
  std::size_t knowledge_dim = 128;   // D
  std::size_t heads = 8;             // m
  std::size_t out_channels = 64;     // C_out (GRU width)
  std::size_t window = 21;           // w
  std::uint64_t seed = 0;
  LossMode loss_mode = LossMode::kDiscriminative;
  Competitors competitors = Competitors::kEdits;
  std::size_t reestimate_every = 10;

  double detection_threshold = 0.5;
  double iou_thresh = 0.5;
  long time_gap = 30;

  std::size_t model_dim = 128;  // integrator width
  std::size_t integrator_layers = 2;
  std::size_t attention_heads = 4;
  std::size_t mlp_dim = 256;
  std::size_t hyper_hidden = 256;

  bool use_hoi = true;          // false: s = 0
  bool use_independent = true;  // false: W^z = 1, b^z = 1

  std::size_t max_segment_length = 0;  // 0: unbounded
  double prior_floor = 1e-6;
  double prior_alpha = 1.0;

  // Throws ConfigError on an unknown key or an unparsable value.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;
  static std::vector<std::string> keys();
  void validate() const;
};

}  // namespace adaact::train
