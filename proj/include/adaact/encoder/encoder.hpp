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
#include <span>
#include <string>
#include <vector>

#include "adaact/hypernet/hypernet.hpp"
#include "adaact/matrix.hpp"
#include "adaact/numcore/tensor.hpp"

namespace adaact::encoder {

// Gate parameters of a single-layer GRU with F inputs and C_out hidden units.
struct GruParams {
  num::Tensor w_z, w_r, w_h;  // F x C_out
  num::Tensor u_z, u_r, u_h;  // C_out x C_out
  num::Tensor b_z, b_r, b_h;  // C_out

  static GruParams init(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng);
  std::size_t input_dim() const { return w_z.rows(); }
  std::size_t hidden() const { return w_z.cols(); }
  std::vector<NamedTensor> named_parameters(const std::string& prefix = "gru.") const;
};

// Final hidden state after running the GRU from a zero state over frames
// [t - w/2, t + w/2], truncated at the sequence ends.
num::Tensor gru_window(const Matrix& x, std::size_t t, std::size_t w, const GruParams& params);

// gru_window for every frame at once (T x C_out). Row t equals gru_window(x, t).
num::Tensor gru_windows(const Matrix& x, std::size_t w, const GruParams& params);

// Row t = log softmax(h_t W + b).
num::Tensor log_posteriors(const Matrix& x, const hypernet::GeneratedHead& head, const GruParams& params,
                           std::size_t w);
// Row t = softmax(h_t W + b).
num::Tensor posteriors(const Matrix& x, const hypernet::GeneratedHead& head, const GruParams& params, std::size_t w);

// Floors every entry at `floor` and renormalizes.
std::vector<double> floor_prior(std::span<const double> prior, double floor);

// S[t][a] = log p(a|x_t) - log prior[a], with the prior floored first.
num::Tensor class_scores(const num::Tensor& log_posteriors, std::span<const double> prior, double prior_floor = 1e-6);

}  // namespace adaact::encoder
