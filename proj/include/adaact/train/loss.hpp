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

#include <optional>

#include "adaact/decode/decode.hpp"
#include "adaact/numcore/tensor.hpp"
#include "adaact/train/config.hpp"

namespace adaact::train {

// Grammar the discriminative loss normalizes over for target `tr`. With
// kGrammar this is `g`, extended by `tr` when missing (prior 1/(n+1), others
// rescaled by n/(n+1)). With kEdits it is `g` plus every single-action
// substitution of `tr`, under a uniform prior.
decode::Grammar competitor_grammar(const decode::Grammar& g, const decode::Transcript& tr, std::size_t num_actions,
                                   Competitors mode);

// -(log prior(tr) + log Z(tr) - log Z(g)) = -log p(tr | video) as a scalar on
// the tape; the gradient with respect to `scores` is marginals(g) -
// marginals(tr). A target missing from `competitors` is added as with
// Competitors::kGrammar. Returns nullopt when `tr` cannot be laid out over
// the frames.
std::optional<num::Tensor> discriminative_loss(const num::Tensor& scores, const decode::Transcript& tr,
                                               const decode::Grammar& competitors, const decode::LengthModel& lm,
                                               const decode::DecodeOptions& opts = {});

// Mean negative log posterior of the Viterbi alignment of `tr` under `scores`.
std::optional<num::Tensor> pseudo_label_loss(const num::Tensor& log_posteriors, const num::Tensor& scores,
                                             const decode::Transcript& tr, const decode::LengthModel& lm,
                                             const decode::DecodeOptions& opts = {});

}  // namespace adaact::train
