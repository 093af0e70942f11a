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

#include "adaact/train/loss.hpp"

#include <cmath>

#include "adaact/errors.hpp"

namespace adaact::train {
namespace {

Matrix as_matrix(const num::Tensor& t) {
  return Matrix(t.rows(), t.cols(), std::vector<double>(t.values().begin(), t.values().end()));
}

bool feasible(const decode::Transcript& tr, std::size_t frames, const decode::DecodeOptions& opts) {
  if (tr.size() == 0 || tr.size() > frames) return false;
  const std::size_t cap = opts.max_segment_length == 0 ? frames : opts.max_segment_length;
  return tr.size() * cap >= frames;
}

}  // namespace

decode::Grammar competitor_grammar(const decode::Grammar& g, const decode::Transcript& tr, std::size_t num_actions,
                                   Competitors mode) {
  if (mode == Competitors::kGrammar) {
    if (g.find(tr) >= 0) return g;
    decode::Grammar out;
    const double n = static_cast<double>(g.size());
    const double shift = std::log(n / (n + 1.0));
    for (std::size_t i = 0; i < g.size(); ++i) out.add(g.transcripts[i], g.log_prior[i] + shift);
    out.add(tr, -std::log(n + 1.0));
    return out;
  }
  std::vector<decode::Transcript> all = g.transcripts;
  auto push = [&all](const decode::Transcript& t) {
    for (const auto& e : all) {
      if (e == t) return;
    }
    all.push_back(t);
  };
  push(tr);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t a = 0; a < num_actions; ++a) {
      if (static_cast<decode::ActionId>(a) == tr.actions[i]) continue;
      decode::Transcript edit = tr;
      edit.actions[i] = static_cast<decode::ActionId>(a);
      push(edit);
    }
  }
  return decode::Grammar::uniform(std::move(all));
}

std::optional<num::Tensor> discriminative_loss(const num::Tensor& scores, const decode::Transcript& tr,
                                               const decode::Grammar& competitors, const decode::LengthModel& lm,
                                               const decode::DecodeOptions& opts) {
  const Matrix s = as_matrix(scores);
  if (!feasible(tr, s.rows, opts)) return std::nullopt;
  const decode::Grammar g =
      competitors.find(tr) >= 0 ? competitors : competitor_grammar(competitors, tr, s.cols, Competitors::kGrammar);
  const auto idx = static_cast<std::size_t>(g.find(tr));

  const decode::Partition valid = decode::log_partition_marginals(s, tr, lm, opts);
  const decode::Partition all = decode::log_partition_marginals(s, g, lm, opts);
  if (!std::isfinite(valid.log_z)) return std::nullopt;
  // Clamp tiny negative round-off: the target is one of the competitors.
  const double value = std::max(0.0, all.log_z - valid.log_z - g.log_prior[idx]);

  std::vector<double> diff(s.data.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = all.marginals.data[i] - valid.marginals.data[i];
  return num::record({1}, {value}, {scores}, [diff = std::move(diff)](num::Node& self) {
    num::Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    auto& g = p.ensure_grad();
    for (std::size_t i = 0; i < diff.size(); ++i) g[i] += self.grad[0] * diff[i];
  });
}

std::optional<num::Tensor> pseudo_label_loss(const num::Tensor& log_posteriors, const num::Tensor& scores,
                                             const decode::Transcript& tr, const decode::LengthModel& lm,
                                             const decode::DecodeOptions& opts) {
  const Matrix s = as_matrix(scores);
  if (!feasible(tr, s.rows, opts)) return std::nullopt;
  const decode::Alignment al = decode::align(s, tr, lm, opts);
  if (!std::isfinite(al.score)) return std::nullopt;
  const auto labels = al.segmentation.frame_labels();
  std::vector<std::size_t> cols(labels.begin(), labels.end());
  return num::scale(num::mean(num::pick(log_posteriors, cols)), -1.0);
}

}  // namespace adaact::train
