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

#include "adaact/hoi/integrator.hpp"

#include <cmath>

#include "adaact/errors.hpp"

namespace adaact::hoi {
namespace {

using num::Tensor;

Tensor xavier(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  return num::uniform_parameter({fan_in, fan_out}, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

Tensor zeros_param(std::size_t n) { return Tensor::zeros({n}, true); }
Tensor ones_param(std::size_t n) { return Tensor::filled({n}, 1.0, true); }

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) { return num::add_row(num::matmul(x, w), b); }

Tensor self_attention(const Tensor& x, const EncoderBlock& blk, std::size_t heads) {
  const std::size_t d = x.cols();
  const std::size_t dh = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  Tensor q = linear(x, blk.wq, blk.bq);
  Tensor k = linear(x, blk.wk, blk.bk);
  Tensor v = linear(x, blk.wv, blk.bv);
  std::vector<Tensor> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    Tensor qh = num::slice_cols(q, h * dh, dh);
    Tensor kh = num::slice_cols(k, h * dh, dh);
    Tensor vh = num::slice_cols(v, h * dh, dh);
    Tensor attn = num::softmax_rows(num::scale(num::matmul(qh, num::transpose(kh)), inv_sqrt));
    outs.push_back(num::matmul(attn, vh));
  }
  return linear(num::concat_cols(outs), blk.wo, blk.bo);
}

}  // namespace

IntegratorParams IntegratorParams::init(const IntegratorConfig& cfg, std::mt19937_64& rng) {
  if (cfg.heads == 0 || cfg.model_dim % cfg.heads != 0) {
    throw ConfigError("integrator: model_dim " + std::to_string(cfg.model_dim) + " not divisible by heads " +
                      std::to_string(cfg.heads));
  }
  if (cfg.model_dim < 2 || cfg.embedding_dim == 0 || cfg.max_items == 0) throw ConfigError("integrator: empty dimension");
  IntegratorParams p;
  p.config = cfg;
  const std::size_t d = cfg.model_dim;
  p.input_proj = xavier(cfg.embedding_dim, d, rng);
  p.class_token = num::normal_parameter({d}, 0.02, rng);
  p.position = num::normal_parameter({cfg.max_items + 1, d}, 0.02, rng);
  for (std::size_t n = 0; n < cfg.layers; ++n) {
    EncoderBlock b;
    b.ln1_gain = ones_param(d);
    b.ln1_shift = zeros_param(d);
    b.wq = xavier(d, d, rng);
    b.bq = zeros_param(d);
    b.wk = xavier(d, d, rng);
    b.bk = zeros_param(d);
    b.wv = xavier(d, d, rng);
    b.bv = zeros_param(d);
    b.wo = xavier(d, d, rng);
    b.bo = zeros_param(d);
    b.ln2_gain = ones_param(d);
    b.ln2_shift = zeros_param(d);
    b.mlp_w1 = xavier(d, cfg.mlp_dim, rng);
    b.mlp_b1 = zeros_param(cfg.mlp_dim);
    b.mlp_w2 = xavier(cfg.mlp_dim, d, rng);
    b.mlp_b2 = zeros_param(d);
    p.blocks.push_back(std::move(b));
  }
  if (cfg.model_dim != cfg.output_dim) p.output_proj = xavier(d, cfg.output_dim, rng);
  return p;
}

std::vector<NamedTensor> IntegratorParams::named_parameters(const std::string& prefix) const {
  std::vector<NamedTensor> out{{prefix + "input_proj", input_proj},
                               {prefix + "class_token", class_token},
                               {prefix + "position", position}};
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    const auto& b = blocks[n];
    const std::string p = prefix + "block" + std::to_string(n) + ".";
    out.insert(out.end(), {{p + "ln1_gain", b.ln1_gain}, {p + "ln1_shift", b.ln1_shift}, {p + "wq", b.wq},
                           {p + "bq", b.bq},             {p + "wk", b.wk},               {p + "bk", b.bk},
                           {p + "wv", b.wv},             {p + "bv", b.bv},               {p + "wo", b.wo},
                           {p + "bo", b.bo},             {p + "ln2_gain", b.ln2_gain},   {p + "ln2_shift", b.ln2_shift},
                           {p + "mlp_w1", b.mlp_w1},     {p + "mlp_b1", b.mlp_b1},       {p + "mlp_w2", b.mlp_w2},
                           {p + "mlp_b2", b.mlp_b2}});
  }
  if (output_proj.defined()) out.emplace_back(prefix + "output_proj", output_proj);
  return out;
}

Tensor integrate(const HoiSelection& sel, const IntegratorParams& params) {
  const auto& cfg = params.config;
  const std::size_t n = sel.items.size();
  if (n > cfg.max_items) {
    throw ConfigError("integrate: " + std::to_string(n) + " items exceed K=" + std::to_string(cfg.max_items));
  }
  const std::size_t d = cfg.model_dim;

  std::vector<Tensor> rows{num::reshape(params.class_token, {1, d})};
  if (n > 0) {
    std::vector<double> emb;
    emb.reserve(n * cfg.embedding_dim);
    for (const auto& item : sel.items) {
      if (item.embedding.size() != cfg.embedding_dim) {
        throw ConfigError("integrate: embedding length " + std::to_string(item.embedding.size()) + ", expected " +
                          std::to_string(cfg.embedding_dim));
      }
      emb.insert(emb.end(), item.embedding.begin(), item.embedding.end());
    }
    rows.push_back(num::matmul(Tensor::constant({n, cfg.embedding_dim}, std::move(emb)), params.input_proj));
  }
  Tensor x = num::add(num::concat_rows(rows), num::slice_rows(params.position, 0, n + 1));

  for (const auto& blk : params.blocks) {
    Tensor attn = self_attention(num::layernorm(x, blk.ln1_gain, blk.ln1_shift), blk, cfg.heads);
    x = num::add(attn, x);
    Tensor hidden = num::relu(linear(num::layernorm(x, blk.ln2_gain, blk.ln2_shift), blk.mlp_w1, blk.mlp_b1));
    x = num::add(linear(hidden, blk.mlp_w2, blk.mlp_b2), x);
  }

  Tensor token = num::slice_rows(x, 0, 1);
  if (params.output_proj.defined()) token = num::matmul(token, params.output_proj);
  return num::reshape(token, {cfg.output_dim});
}

}  // namespace adaact::hoi
