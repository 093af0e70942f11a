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

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "adaact/decode/decode.hpp"
#include "adaact/hoi/detection.hpp"
#include "adaact/matrix.hpp"
#include "adaact/numcore/tensor.hpp"

namespace oracle {

using adaact::Matrix;
namespace num = adaact::num;
namespace decode = adaact::decode;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---- finite differences ---------------------------------------------------

struct GradCheck {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
};

// |analytic - numeric| / max(|analytic|, |numeric|, floor).
inline double rel_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central differences of the scalar `loss()` with respect to every entry of
// `params` (or `sample` random entries per tensor when nonzero), compared
// with one reverse pass. The five-point stencil tolerates a larger step,
// which keeps round-off small on long computations.
inline GradCheck check_gradients(const std::function<num::Tensor()>& loss, std::vector<num::Tensor> params,
                                 double h = 1e-5, std::size_t sample = 0, std::uint64_t seed = 0,
                                 bool five_point = false) {
  for (auto& p : params) p.zero_grad();
  num::backward(loss());
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) analytic.emplace_back(p.grad().begin(), p.grad().end());

  std::mt19937_64 rng(seed);
  GradCheck out;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k].mutable_values();
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (sample > 0 && sample < idx.size()) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(sample);
    }
    for (std::size_t i : idx) {
      const double keep = values[i];
      auto at = [&](double step) {
        values[i] = keep + step;
        const double v = loss().item();
        values[i] = keep;
        return v;
      };
      const double numeric = five_point ? (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h)
                                        : (at(h) - at(-h)) / (2.0 * h);
      out.max_rel_error = std::max(out.max_rel_error, rel_error(analytic[k][i], numeric));
      out.max_abs_error = std::max(out.max_abs_error, std::abs(analytic[k][i] - numeric));
      ++out.checked;
    }
  }
  return out;
}

// Fixed random projection that turns any tensor into a scalar loss, so that
// every output entry contributes a distinct weight.
inline num::Tensor project(const num::Tensor& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(t.size());
  for (auto& v : w) v = unit(rng);
  return num::sum(num::mul(t, num::Tensor::constant(t.shape(), std::move(w))));
}

inline num::Tensor random_tensor(num::Shape shape, std::mt19937_64& rng, double scale = 1.0, bool grad = true) {
  std::normal_distribution<double> unit(0.0, scale);
  std::vector<double> v(num::shape_size(shape));
  for (auto& x : v) x = unit(rng);
  return grad ? num::Tensor::parameter(std::move(shape), std::move(v))
              : num::Tensor::constant(std::move(shape), std::move(v));
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> unit(0.0, scale);
  Matrix m(r, c);
  for (auto& x : m.data) x = unit(rng);
  return m;
}

// ---- segmentation enumeration --------------------------------------------

// Every composition of `frames` into `parts` positive lengths with each part
// at most `cap`, in lexicographic order of the length vector.
inline std::vector<std::vector<std::size_t>> compositions(std::size_t frames, std::size_t parts, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t left) {
    if (cur.size() + 1 == parts) {
      if (left >= 1 && left <= cap) {
        cur.push_back(left);
        out.push_back(cur);
        cur.pop_back();
      }
      return;
    }
    for (std::size_t l = 1; l <= cap && l + (parts - cur.size() - 1) <= left; ++l) {
      cur.push_back(l);
      rec(left - l);
      cur.pop_back();
    }
  };
  if (parts >= 1 && frames >= parts) rec(frames);
  return out;
}

inline double log_poisson(std::size_t l, double lambda) {
  const double k = static_cast<double>(l);
  return k * std::log(lambda) - lambda - std::lgamma(k + 1.0);
}

// Sum of frame scores plus log durations. Each segment's frames are summed
// last to first and added to the running total before its duration term, so
// exact ties between paths compare bit for bit against the decoder.
inline double path_score(const Matrix& s, const decode::Transcript& tr, const std::vector<std::size_t>& lengths,
                         const decode::LengthModel& lm) {
  double total = 0.0;
  std::size_t start = 0;
  for (std::size_t o = 0; o < lengths.size(); ++o) {
    const auto a = static_cast<std::size_t>(tr.actions[o]);
    double seg = 0.0;
    for (std::size_t k = start + lengths[o]; k-- > start;) seg += s(k, a);
    total = total + seg + log_poisson(lengths[o], lm.lambda[a]);
    start += lengths[o];
  }
  return total;
}

inline double lse(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double total = 0.0;
  for (double x : v) total += std::exp(x - mx);
  return mx + std::log(total);
}

struct BruteAlignment {
  bool feasible = false;
  double score = kNegInf;
  std::vector<std::size_t> lengths;
};

// Best composition; among equal scores the one whose final segment is
// shortest, then (recursively) the shortest preceding segment, i.e. the
// lexicographically greatest length vector read from the end.
inline BruteAlignment brute_align(const Matrix& s, const decode::Transcript& tr, const decode::LengthModel& lm,
                                  std::size_t cap = 0) {
  const std::size_t limit = cap == 0 ? s.rows : cap;
  std::vector<std::pair<double, std::vector<std::size_t>>> all;
  double top = kNegInf;
  for (const auto& c : compositions(s.rows, tr.size(), limit)) {
    all.emplace_back(path_score(s, tr, c, lm), c);
    top = std::max(top, all.back().first);
  }
  // Anything within rounding of the max counts as tied; among those the
  // shorter segment wins, comparing from the last segment backwards.
  BruteAlignment best;
  for (const auto& [v, c] : all) {
    if (std::abs(v - top) > 1e-9 * (1.0 + std::abs(top))) continue;
    bool take = !best.feasible;
    for (std::size_t o = c.size(); !take && o-- > 0;) {
      if (c[o] != best.lengths[o]) {
        take = c[o] < best.lengths[o];
        break;
      }
    }
    if (take) best = {true, v, c};
  }
  return best;
}

struct BruteSegment {
  long index = -1;  // -1 when no transcript fits
  double score = 0.0;
  std::vector<std::size_t> lengths;
};

// Best (transcript, composition) over a grammar by enumeration. Totals within
// rounding of the max tie; the earliest grammar entry wins.
inline BruteSegment brute_segment(const Matrix& s, const decode::Grammar& g, const decode::LengthModel& lm,
                                  std::size_t cap = 0) {
  std::vector<BruteAlignment> paths;
  double top = kNegInf;
  for (std::size_t k = 0; k < g.size(); ++k) {
    paths.push_back(brute_align(s, g.transcripts[k], lm, cap));
    if (paths.back().feasible) top = std::max(top, paths.back().score + g.log_prior[k]);
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!paths[k].feasible) continue;
    const double total = paths[k].score + g.log_prior[k];
    if (std::abs(total - top) <= 1e-9 * (1.0 + std::abs(top))) return {static_cast<long>(k), total, paths[k].lengths};
  }
  return {};
}

inline double brute_log_partition(const Matrix& s, const decode::Transcript& tr, const decode::LengthModel& lm,
                                  std::size_t cap = 0) {
  std::vector<double> terms;
  for (const auto& c : compositions(s.rows, tr.size(), cap == 0 ? s.rows : cap)) {
    terms.push_back(path_score(s, tr, c, lm));
  }
  return lse(terms);
}

// ---- video NMS --------------------------------------------------------------

inline double box_iou(const adaact::hoi::Box& a, const adaact::hoi::Box& b) {
  const double ix = std::max(0.0, std::min(a[2], b[2]) - std::max(a[0], b[0]));
  const double iy = std::max(0.0, std::min(a[3], b[3]) - std::max(a[1], b[1]));
  const double inter = ix * iy;
  const double area_a = (a[2] - a[0]) * (a[3] - a[1]);
  const double area_b = (b[2] - b[0]) * (b[3] - b[1]);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// Quadratic greedy selection written from the definition: pick the best
// remaining candidate (score desc, then t asc, then input position), drop
// everything it suppresses, repeat. Returns input indices in output order.
inline std::vector<std::size_t> reference_nms(const std::vector<adaact::hoi::HoiDetection>& dets, double iou_thresh,
                                              long time_gap, std::size_t k) {
  std::vector<bool> alive(dets.size(), true);
  std::vector<std::size_t> kept;
  while (kept.size() < k) {
    long pick = -1;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (!alive[i]) continue;
      if (pick < 0) {
        pick = static_cast<long>(i);
        continue;
      }
      const auto& p = dets[static_cast<std::size_t>(pick)];
      if (dets[i].score > p.score || (dets[i].score == p.score && dets[i].t < p.t)) pick = static_cast<long>(i);
    }
    if (pick < 0) break;
    const auto& best = dets[static_cast<std::size_t>(pick)];
    kept.push_back(static_cast<std::size_t>(pick));
    alive[static_cast<std::size_t>(pick)] = false;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (!alive[i]) continue;
      const long dt = std::abs(dets[i].t - best.t);
      if (box_iou(dets[i].obj_box, best.obj_box) > iou_thresh && dt < time_gap) alive[i] = false;
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].t != dets[b].t) return dets[a].t < dets[b].t;
    return dets[a].score > dets[b].score;
  });
  return kept;
}

}  // namespace oracle
