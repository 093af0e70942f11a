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
#include <filesystem>
#include <span>
#include <vector>

#include "adaact/data/corpus.hpp"
#include "adaact/decode/decode.hpp"
#include "adaact/train/config.hpp"
#include "adaact/train/model.hpp"

namespace adaact::train {

ModelDims corpus_dims(const data::Corpus& corpus);

// Fresh model with a uniform class prior, every length mean set to the mean
// video length over the mean transcript length, and the distinct training
// transcripts as a uniform grammar.
ModelState initial_state(const data::Corpus& corpus, const TrainConfig& cfg);

struct EpochReport {
  std::size_t epoch = 0;  // 1-based index of the finished epoch
  double mean_loss = 0.0;
  std::size_t skipped = 0;  // videos whose transcript could not be laid out
};

// One pass of per-video SGD over the corpus in a seeded shuffled order.
// Re-estimates prior, lengths and grammar every cfg.reestimate_every epochs.
EpochReport train_epoch(ModelState& state, const data::Corpus& corpus, const TrainConfig& cfg);

// Prior, lengths and grammar from Viterbi pseudo labels of every video.
void reestimate(ModelState& state, const data::Corpus& corpus, const TrainConfig& cfg);

decode::SegmentResult segment_video(const ModelState& state, const data::Video& video, const TrainConfig& cfg);
decode::Alignment align_video(const ModelState& state, const data::Video& video, const decode::Transcript& tr,
                              const TrainConfig& cfg);

// Binary parameters at `path` plus a JSON sidecar at `path`.json holding the
// configuration, dimensions, decoding statistics and epoch.
void save_checkpoint(const std::filesystem::path& path, const ModelState& state, const TrainConfig& cfg);

struct Checkpoint {
  TrainConfig config;
  ModelState state;
};
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace adaact::train
