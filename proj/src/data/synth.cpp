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

#include "adaact/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "adaact/errors.hpp"

namespace adaact::data {
namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

// Rescales positive draws to sum exactly to `total`, every entry >= 1.
// Remainders go to the largest fractional parts, earlier index first on ties.
std::vector<std::size_t> fit_lengths(const std::vector<double>& raw, std::size_t total) {
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  const std::size_t n = raw.size();
  std::vector<std::size_t> out(n);
  std::vector<double> frac(n);
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = 1.0 + raw[i] / sum * static_cast<double>(total - n);
    out[i] = static_cast<std::size_t>(std::floor(share));
    frac[i] = share - static_cast<double>(out[i]);
    used += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; used < total; ++k, ++used) ++out[order[k % n]];
  return out;
}

}  // namespace

SynthConfig SynthConfig::defaults() {
  SynthConfig cfg;
  cfg.actions = {"SIL", "take_cup", "pour_coffee", "pour_juice", "add_sugar", "stir"};
  cfg.mean_length = {15.0, 25.0, 40.0, 40.0, 20.0, 30.0};
  cfg.activities = {
      {"coffee", {"SIL", "take_cup", "pour_coffee", "add_sugar", "stir", "SIL"}, {}},
      {"juice", {"SIL", "take_cup", "pour_juice", "add_sugar", "stir", "SIL"}, {}},
  };
  cfg.ambiguous_pairs = {{"pour_coffee", "pour_juice"}};
  return cfg;
}

void SynthConfig::validate() const {
  if (actions.empty()) throw ConfigError("synth: no actions");
  if (mean_length.size() != actions.size()) throw ConfigError("synth: mean_length needs one entry per action");
  for (double l : mean_length) {
    if (!(l > 0.0)) throw ConfigError("synth: mean lengths must be positive");
  }
  if (activities.empty()) throw ConfigError("synth: no activities");
  if (feature_dim == 0 || embedding_dim == 0) throw ConfigError("synth: feature_dim and embedding_dim must be positive");
  if (t_min == 0 || t_min > t_max) throw ConfigError("synth: need 0 < t_min <= t_max");
  if (videos_per_activity == 0) throw ConfigError("synth: videos_per_activity must be positive");
  if (hoi_min_events > hoi_max_events) throw ConfigError("synth: hoi_min_events exceeds hoi_max_events");
  if (sigma_feat < 0.0 || sigma_hoi < 0.0) throw ConfigError("synth: noise levels must be non-negative");
  ActionMap map{actions};
  for (const auto& act : activities) {
    if (act.transcript.empty()) throw ConfigError("synth: activity " + act.name + " has an empty transcript");
    if (act.transcript.size() > t_min) throw ConfigError("synth: activity " + act.name + " has more actions than t_min");
    for (const auto& a : act.transcript) {
      try {
        (void)map.id(a);
      } catch (const ValidationError&) {
        throw ConfigError("synth: activity " + act.name + " uses unknown action " + a);
      }
    }
    if (!act.hoi_mean.empty() && act.hoi_mean.size() != embedding_dim) {
      throw ConfigError("synth: activity " + act.name + " hoi_mean has the wrong length");
    }
  }
  for (const auto& [a, b] : ambiguous_pairs) {
    try {
      if (map.id(a) == map.id(b)) throw ConfigError("synth: ambiguous pair must name two distinct actions");
    } catch (const ValidationError&) {
      throw ConfigError("synth: ambiguous pair names an unknown action");
    }
  }
}

SyntheticCorpus generate_corpus(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  SyntheticCorpus out;
  out.corpus.actions = ActionMap{cfg.actions};
  out.corpus.embedding_dim = cfg.embedding_dim;
  const std::size_t num_actions = cfg.actions.size();

  out.action_means.assign(num_actions, std::vector<double>(cfg.feature_dim));
  for (auto& mu : out.action_means)
    for (auto& v : mu) v = cfg.feature_mean_scale * unit(rng);
  for (const auto& [a, b] : cfg.ambiguous_pairs) {
    out.action_means[static_cast<std::size_t>(out.corpus.actions.id(b))] =
        out.action_means[static_cast<std::size_t>(out.corpus.actions.id(a))];
  }

  // Cluster means are redrawn until every pair is at least 4 sigma_hoi apart.
  for (const auto& act : cfg.activities) {
    if (!act.hoi_mean.empty()) {
      out.hoi_means.push_back(act.hoi_mean);
      continue;
    }
    std::vector<double> mu(cfg.embedding_dim);
    for (int attempt = 0;; ++attempt) {
      for (auto& v : mu) v = cfg.hoi_mean_scale * unit(rng);
      bool separated = std::all_of(out.hoi_means.begin(), out.hoi_means.end(),
                                   [&](const auto& other) { return distance(mu, other) >= 4.0 * cfg.sigma_hoi; });
      if (separated) break;
      if (attempt > 1000) throw ConfigError("synth: cannot separate HOI cluster means; raise hoi_mean_scale");
    }
    out.hoi_means.push_back(mu);
  }

  std::uniform_int_distribution<std::size_t> length_dist(cfg.t_min, cfg.t_max);
  std::uniform_int_distribution<std::size_t> events_dist(cfg.hoi_min_events, cfg.hoi_max_events);
  std::uniform_real_distribution<double> score_dist(0.5, 1.0);
  std::uniform_real_distribution<double> pos_x(0.0, 520.0), pos_y(0.0, 360.0), extent(40.0, 120.0);

  std::size_t serial = 0;
  for (std::size_t rep = 0; rep < cfg.videos_per_activity; ++rep) {
    for (std::size_t act = 0; act < cfg.activities.size(); ++act) {
      const auto& spec = cfg.activities[act];
      Video v;
      char id[64];
      std::snprintf(id, sizeof id, "v%03zu_%s", serial++, spec.name.c_str());
      v.id = id;
      for (const auto& name : spec.transcript) v.transcript.actions.push_back(out.corpus.actions.id(name));

      const std::size_t frames = length_dist(rng);
      std::vector<double> raw;
      for (auto a : v.transcript.actions) {
        std::poisson_distribution<long> pois(cfg.mean_length[static_cast<std::size_t>(a)]);
        raw.push_back(static_cast<double>(std::max(1L, pois(rng))));
      }
      auto lengths = fit_lengths(raw, frames);
      decode::Segmentation gt;
      for (std::size_t o = 0; o < lengths.size(); ++o) gt.segments.push_back({v.transcript.actions[o], lengths[o]});

      v.features = Matrix(frames, cfg.feature_dim);
      auto labels = gt.frame_labels();
      for (std::size_t t = 0; t < frames; ++t) {
        const auto& mu = out.action_means[static_cast<std::size_t>(labels[t])];
        for (std::size_t f = 0; f < cfg.feature_dim; ++f) v.features(t, f) = mu[f] + cfg.sigma_feat * unit(rng);
      }

      const std::size_t events = events_dist(rng);
      std::uniform_int_distribution<long> time_dist(0, static_cast<long>(frames) - 1);
      for (std::size_t e = 0; e < events; ++e) {
        hoi::HoiDetection d;
        d.t = time_dist(rng);
        const double hx = pos_x(rng), hy = pos_y(rng);
        d.hand_box = {hx, hy, hx + extent(rng), hy + extent(rng)};
        const double ox = pos_x(rng), oy = pos_y(rng);
        d.obj_box = {ox, oy, ox + extent(rng), oy + extent(rng)};
        d.score = score_dist(rng);
        d.embedding.resize(cfg.embedding_dim);
        for (std::size_t i = 0; i < cfg.embedding_dim; ++i) d.embedding[i] = out.hoi_means[act][i] + cfg.sigma_hoi * unit(rng);
        v.detections.push_back(std::move(d));
      }
      std::stable_sort(v.detections.begin(), v.detections.end(),
                       [](const hoi::HoiDetection& a, const hoi::HoiDetection& b) { return a.t < b.t; });

      v.ground_truth = std::move(gt);
      out.corpus.videos.push_back(std::move(v));
      out.activity.push_back(act);
    }
  }
  return out;
}

}  // namespace adaact::data
