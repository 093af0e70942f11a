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
#include <vector>

#include "adaact/numcore/tensor.hpp"

namespace adaact::hypernet {

// Linear(in -> hidden) + ReLU + Linear(hidden -> out), applied row-wise.
struct BranchNet {
  num::Tensor w1, b1, w2, b2;

  static BranchNet init(std::size_t in, std::size_t hidden, std::size_t out, std::mt19937_64& rng);
  num::Tensor forward(const num::Tensor& rows) const;
  std::size_t out_len() const { return w2.cols(); }
  std::vector<NamedTensor> named_parameters(const std::string& prefix) const;
};

// HOI-independent list z and dependent-branch list u, each m x D.
struct KnowledgeBank {
  num::Tensor z;
  num::Tensor u;

  static KnowledgeBank init(std::size_t heads, std::size_t dim, std::mt19937_64& rng);
  std::size_t heads() const { return z.rows(); }
  std::size_t dim() const { return z.cols(); }
};

struct HyperNetConfig {
  std::size_t knowledge_dim = 128;  // D
  std::size_t heads = 8;            // m
  std::size_t hidden = 256;         // D_h
  std::size_t out_channels = 64;    // C_out
  std::size_t num_actions = 48;     // A
  // false drops the independent branch: W^z and b^z become all ones.
  bool use_independent = true;
};

// Classifier parameters for one video: logits = h * weight + bias.
struct GeneratedHead {
  num::Tensor weight;  // C_out x A
  num::Tensor bias;    // A
};

struct HyperNetwork {
  HyperNetConfig config;
  KnowledgeBank bank;
  BranchNet weight_independent;  // H_i
  BranchNet weight_dependent;    // H_d
  BranchNet bias_independent;    // H'_i
  BranchNet bias_dependent;      // H'_d

  static HyperNetwork init(const HyperNetConfig& cfg, std::mt19937_64& rng);
  std::vector<NamedTensor> named_parameters(const std::string& prefix = "hypernet.") const;
};

// Each row of `heads` (m x D) goes through `net`; output i is reshaped
// row-major into a (C_out/m) x A block and blocks are stacked in row order.
num::Tensor independent_weights(const num::Tensor& heads, const BranchNet& net, std::size_t out_channels,
                                std::size_t num_actions);

// As independent_weights with every head input shifted by s.
num::Tensor dependent_weights(const num::Tensor& heads, const num::Tensor& s, const BranchNet& net,
                              std::size_t out_channels, std::size_t num_actions);

// Element-wise product of the two branch outputs.
num::Tensor fuse(const num::Tensor& from_independent, const num::Tensor& from_dependent);

GeneratedHead generate_head(const HyperNetwork& net, const num::Tensor& s);

}  // namespace adaact::hypernet
