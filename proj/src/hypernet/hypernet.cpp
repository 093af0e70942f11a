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

#include "adaact/hypernet/hypernet.hpp"

#include <cmath>

#include "adaact/errors.hpp"

namespace adaact::hypernet {
namespace {

using num::Tensor;

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
Tensor fan_in_uniform(num::Shape shape, std::size_t fan_in, std::mt19937_64& rng) {
  return num::uniform_parameter(std::move(shape), 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
}

void check_divisible(std::size_t out_channels, std::size_t heads) {
  if (heads == 0 || out_channels % heads != 0) {
    throw ConfigError("hypernet: C_out=" + std::to_string(out_channels) + " is not divisible by m=" +
                      std::to_string(heads));
  }
}

}  // namespace

BranchNet BranchNet::init(std::size_t in, std::size_t hidden, std::size_t out, std::mt19937_64& rng) {
  BranchNet n;
  n.w1 = fan_in_uniform({in, hidden}, in, rng);
  n.b1 = fan_in_uniform({hidden}, in, rng);
  n.w2 = fan_in_uniform({hidden, out}, hidden, rng);
  n.b2 = fan_in_uniform({out}, hidden, rng);
  return n;
}

Tensor BranchNet::forward(const Tensor& rows) const {
  Tensor h = num::relu(num::add_row(num::matmul(rows, w1), b1));
  return num::add_row(num::matmul(h, w2), b2);
}

std::vector<NamedTensor> BranchNet::named_parameters(const std::string& prefix) const {
  return {{prefix + "w1", w1}, {prefix + "b1", b1}, {prefix + "w2", w2}, {prefix + "b2", b2}};
}

KnowledgeBank KnowledgeBank::init(std::size_t heads, std::size_t dim, std::mt19937_64& rng) {
  return {num::normal_parameter({heads, dim}, 0.02, rng), num::normal_parameter({heads, dim}, 0.02, rng)};
}

HyperNetwork HyperNetwork::init(const HyperNetConfig& cfg, std::mt19937_64& rng) {
  check_divisible(cfg.out_channels, cfg.heads);
  if (cfg.num_actions == 0 || cfg.knowledge_dim == 0) throw ConfigError("hypernet: empty dimension");
  const std::size_t block = cfg.out_channels / cfg.heads * cfg.num_actions;
  HyperNetwork h;
  h.config = cfg;
  h.bank = KnowledgeBank::init(cfg.heads, cfg.knowledge_dim, rng);
  h.weight_independent = BranchNet::init(cfg.knowledge_dim, cfg.hidden, block, rng);
  h.weight_dependent = BranchNet::init(cfg.knowledge_dim, cfg.hidden, block, rng);
  h.bias_independent = BranchNet::init(cfg.knowledge_dim, cfg.hidden, cfg.num_actions, rng);
  h.bias_dependent = BranchNet::init(cfg.knowledge_dim, cfg.hidden, cfg.num_actions, rng);
  return h;
}

std::vector<NamedTensor> HyperNetwork::named_parameters(const std::string& prefix) const {
  std::vector<NamedTensor> out{{prefix + "z", bank.z}, {prefix + "u", bank.u}};
  const std::pair<const char*, const BranchNet*> parts[] = {{"weight_independent.", &weight_independent},
                                                             {"weight_dependent.", &weight_dependent},
                                                             {"bias_independent.", &bias_independent},
                                                             {"bias_dependent.", &bias_dependent}};
  for (const auto& [name, net] : parts) {
    auto more = net->named_parameters(prefix + name);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

Tensor independent_weights(const Tensor& heads, const BranchNet& net, std::size_t out_channels,
                           std::size_t num_actions) {
  const std::size_t m = heads.rows();
  check_divisible(out_channels, m);
  if (net.out_len() != out_channels / m * num_actions) {
    throw DimensionError("hypernet: branch emits " + std::to_string(net.out_len()) + " values per head, expected " +
                         std::to_string(out_channels / m * num_actions));
  }
  // Row i of the m x (C_out/m * A) output is head i's flattened block, so a
  // row-major reshape stacks the blocks vertically.
  return num::reshape(net.forward(heads), {out_channels, num_actions});
}

Tensor dependent_weights(const Tensor& heads, const Tensor& s, const BranchNet& net, std::size_t out_channels,
                         std::size_t num_actions) {
  return independent_weights(num::add_row(heads, s), net, out_channels, num_actions);
}

Tensor fuse(const Tensor& from_independent, const Tensor& from_dependent) {
  return num::mul(from_independent, from_dependent);
}

GeneratedHead generate_head(const HyperNetwork& net, const Tensor& s) {
  const auto& cfg = net.config;
  if (s.size() != cfg.knowledge_dim) {
    throw DimensionError("generate_head: s has " + std::to_string(s.size()) + " entries, expected " +
                         std::to_string(cfg.knowledge_dim));
  }
  const Tensor& z = net.bank.z;
  const Tensor& u = net.bank.u;
  Tensor w_dep = dependent_weights(u, s, net.weight_dependent, cfg.out_channels, cfg.num_actions);
  // Bias branches are single-head and read the mean of each embedding list.
  Tensor b_dep = num::reshape(
      net.bias_dependent.forward(num::reshape(num::add(num::mean_rows(u), num::reshape(s, {cfg.knowledge_dim})),
                                              {1, cfg.knowledge_dim})),
      {cfg.num_actions});
  if (!cfg.use_independent) return {w_dep, b_dep};

  Tensor w_ind = independent_weights(z, net.weight_independent, cfg.out_channels, cfg.num_actions);
  Tensor b_ind = num::reshape(net.bias_independent.forward(num::reshape(num::mean_rows(z), {1, cfg.knowledge_dim})),
                              {cfg.num_actions});
  return {fuse(w_ind, w_dep), fuse(b_ind, b_dep)};
}

}  // namespace adaact::hypernet
