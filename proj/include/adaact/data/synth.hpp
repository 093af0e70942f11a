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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adaact/data/corpus.hpp"

namespace adaact::data {

struct ActivitySpec {
  std::string name;
  std::vector<std::string> transcript;  // action names
  std::vector<double> hoi_mean;         // E values; drawn from the seed when empty
};

// Seeded generator for corpora in which paired actions share one frame
// feature distribution and only the video's interaction context (HOI
// embeddings clustered per activity) tells them apart.
struct SynthConfig {
  std::vector<std::string> actions;
  std::vector<double> mean_length;  // Poisson mean per action, frames
  std::vector<ActivitySpec> activities;
  std::vector<std::pair<std::string, std::string>> ambiguous_pairs;
  std::size_t feature_dim = 16;
  std::size_t embedding_dim = 32;
  std::size_t t_min = 80;
  std::size_t t_max = 200;
  std::size_t videos_per_activity = 20;
  double sigma_feat = 1.0;
  double sigma_hoi = 0.5;
  double feature_mean_scale = 1.0;
  double hoi_mean_scale = 1.0;
  std::size_t hoi_min_events = 3;
  std::size_t hoi_max_events = 8;
  std::uint64_t seed = 0;

  // Two activities (coffee, juice) over six actions with the ambiguous
  // pair (pour_coffee, pour_juice), SIL bracketing each video.
  static SynthConfig defaults();
  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::vector<double>> action_means;  // A x F
  std::vector<std::vector<double>> hoi_means;     // activities x E
  std::vector<std::size_t> activity;              // per video
};

SyntheticCorpus generate_corpus(const SynthConfig& cfg);

}  // namespace adaact::data
