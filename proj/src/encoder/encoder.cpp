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

#include "adaact/encoder/encoder.hpp"

#include <cmath>

#include "adaact/errors.hpp"

namespace adaact::encoder {
namespace {

using num::Tensor;

void check_window(std::size_t w) {
  if (w == 0 || w % 2 == 0) throw ConfigError("GRU window must be odd and positive, got " + std::to_string(w));
}

// Runs the windowed GRU for the given centre frames. All windows advance in
// lock-step over offsets -w/2..w/2; rows whose frame falls outside the
// sequence keep their state unchanged, which realizes the truncation.
Tensor run_windows(const Matrix& x, std::span<const std::size_t> centres, std::size_t w, const GruParams& p) {
  check_window(w);
  if (x.cols != p.input_dim()) {
    throw DimensionError("GRU expects " + std::to_string(p.input_dim()) + " features, got " + std::to_string(x.cols));
  }
  const std::size_t n = centres.size();
  const std::size_t c = p.hidden();
  const long frames = static_cast<long>(x.rows);
  const long half = static_cast<long>(w / 2);

  Tensor xs = Tensor::constant({x.rows, x.cols}, x.data);
  Tensor xz = num::matmul(xs, p.w_z);
  Tensor xr = num::matmul(xs, p.w_r);
  Tensor xh = num::matmul(xs, p.w_h);

  Tensor h = Tensor::zeros({n, c});
  std::vector<long> index(n);
  std::vector<double> mask(n * c);
  for (long k = -half; k <= half; ++k) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      const long f = static_cast<long>(centres[i]) + k;
      const bool valid = f >= 0 && f < frames;
      index[i] = valid ? f : -1;
      std::fill_n(mask.begin() + static_cast<long>(i * c), c, valid ? 1.0 : 0.0);
      any = any || valid;
    }
    if (!any) continue;
    Tensor z = num::sigmoid(num::add_row(num::add(num::gather_rows(xz, index), num::matmul(h, p.u_z)), p.b_z));
    Tensor r = num::sigmoid(num::add_row(num::add(num::gather_rows(xr, index), num::matmul(h, p.u_r)), p.b_r));
    Tensor cand = num::tanh(
        num::add_row(num::add(num::gather_rows(xh, index), num::matmul(num::mul(r, h), p.u_h)), p.b_h));
    Tensor step = num::mul(num::mul(Tensor::constant({n, c}, mask), z), num::sub(cand, h));
    h = num::add(h, step);
  }
  return h;
}

Tensor logits(const Matrix& x, const hypernet::GeneratedHead& head, const GruParams& params, std::size_t w) {
  if (head.weight.rank() != 2 || head.weight.rows() != params.hidden() || head.bias.size() != head.weight.cols()) {
    throw DimensionError("generated head " + num::shape_string(head.weight.shape()) + " does not match GRU width " +
                         std::to_string(params.hidden()));
  }
  return num::add_row(num::matmul(gru_windows(x, w, params), head.weight), head.bias);
}

}  // namespace

GruParams GruParams::init(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  GruParams p;
  p.w_z = num::uniform_parameter({input_dim, hidden}, bound, rng);
  p.w_r = num::uniform_parameter({input_dim, hidden}, bound, rng);
  p.w_h = num::uniform_parameter({input_dim, hidden}, bound, rng);
  p.u_z = num::uniform_parameter({hidden, hidden}, bound, rng);
  p.u_r = num::uniform_parameter({hidden, hidden}, bound, rng);
  p.u_h = num::uniform_parameter({hidden, hidden}, bound, rng);
  // Low initial update rate: the final state then weighs the whole window
  // rather than its last few frames.
  p.b_z = num::Tensor::filled({hidden}, -3.0, true);
  p.b_r = num::uniform_parameter({hidden}, bound, rng);
  p.b_h = num::uniform_parameter({hidden}, bound, rng);
  return p;
}

std::vector<NamedTensor> GruParams::named_parameters(const std::string& prefix) const {
  return {{prefix + "w_z", w_z}, {prefix + "w_r", w_r}, {prefix + "w_h", w_h},
          {prefix + "u_z", u_z}, {prefix + "u_r", u_r}, {prefix + "u_h", u_h},
          {prefix + "b_z", b_z}, {prefix + "b_r", b_r}, {prefix + "b_h", b_h}};
}

Tensor gru_window(const Matrix& x, std::size_t t, std::size_t w, const GruParams& params) {
  if (t >= x.rows) throw IndexError("gru_window: frame " + std::to_string(t) + " outside sequence of " +
                                    std::to_string(x.rows));
  const std::size_t centre[] = {t};
  return num::reshape(run_windows(x, centre, w, params), {params.hidden()});
}

Tensor gru_windows(const Matrix& x, std::size_t w, const GruParams& params) {
  std::vector<std::size_t> centres(x.rows);
  for (std::size_t t = 0; t < x.rows; ++t) centres[t] = t;
  return run_windows(x, centres, w, params);
}

Tensor log_posteriors(const Matrix& x, const hypernet::GeneratedHead& head, const GruParams& params, std::size_t w) {
  return num::log_softmax_rows(logits(x, head, params, w));
}

Tensor posteriors(const Matrix& x, const hypernet::GeneratedHead& head, const GruParams& params, std::size_t w) {
  return num::softmax_rows(logits(x, head, params, w));
}

std::vector<double> floor_prior(std::span<const double> prior, double floor) {
  std::vector<double> out(prior.begin(), prior.end());
  double total = 0.0;
  for (auto& p : out) total += p = std::max(p, floor);
  for (auto& p : out) p /= total;
  return out;
}

Tensor class_scores(const Tensor& log_posteriors, std::span<const double> prior, double prior_floor) {
  if (prior.size() != log_posteriors.cols()) {
    throw DimensionError("class_scores: prior has " + std::to_string(prior.size()) + " entries for " +
                         std::to_string(log_posteriors.cols()) + " classes");
  }
  std::vector<double> neg_log_prior = floor_prior(prior, prior_floor);
  for (auto& p : neg_log_prior) p = -std::log(p);
  return num::add_row(log_posteriors, Tensor::constant({prior.size()}, std::move(neg_log_prior)));
}

}  // namespace adaact::encoder
