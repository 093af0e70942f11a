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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "adaact/hoi/video_nms.hpp"
#include "adaact/numcore/tensor.hpp"

namespace adaact::hoi {

struct IntegratorConfig {
  std::size_t embedding_dim = 32;  // E
  std::size_t model_dim = 128;     // D_model
  std::size_t output_dim = 128;    // D
  std::size_t layers = 2;          // N
  std::size_t heads = 4;           // h
  std::size_t mlp_dim = 256;
  std::size_t max_items = 10;  // K
};

// One pre-norm transformer block.
struct EncoderBlock {
  num::Tensor ln1_gain, ln1_shift;
  num::Tensor wq, bq, wk, bk, wv, bv, wo, bo;
  num::Tensor ln2_gain, ln2_shift;
  num::Tensor mlp_w1, mlp_b1, mlp_w2, mlp_b2;
};

struct IntegratorParams {
  IntegratorConfig config;
  num::Tensor input_proj;   // E x D_model
  num::Tensor class_token;  // D_model
  num::Tensor position;     // (K+1) x D_model
  std::vector<EncoderBlock> blocks;
  num::Tensor output_proj;  // D_model x D; undefined (identity) when D_model == D

  static IntegratorParams init(const IntegratorConfig& cfg, std::mt19937_64& rng);
  std::vector<NamedTensor> named_parameters(const std::string& prefix = "integrator.") const;
};

// HOI-dependent knowledge s (length D) from the class-token state after the
// block stack. Only the first n+1 position rows are used for n items.
num::Tensor integrate(const HoiSelection& sel, const IntegratorParams& params);

}  // namespace adaact::hoi
