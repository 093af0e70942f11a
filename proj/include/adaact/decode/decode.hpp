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
#include <span>
#include <vector>

#include "adaact/matrix.hpp"

namespace adaact::decode {

// Zero-based action id.
using ActionId = int;

struct Transcript {
  std::vector<ActionId> actions;

  std::size_t size() const { return actions.size(); }
  bool operator==(const Transcript&) const = default;
};

// Class-wise Poisson duration model; lambda[a] is the mean length of action a.
struct LengthModel {
  std::vector<double> lambda;
};

// Admissible transcripts with their log prior, in insertion order.
struct Grammar {
  std::vector<Transcript> transcripts;
  std::vector<double> log_prior;

  static Grammar uniform(std::vector<Transcript> transcripts);
  void add(Transcript tr, double log_prior_value);
  // Index of `tr`, or -1 when absent.
  long find(const Transcript& tr) const;
  bool empty() const { return transcripts.empty(); }
  std::size_t size() const { return transcripts.size(); }
};

struct Segment {
  ActionId action = 0;
  std::size_t length = 0;
  bool operator==(const Segment&) const = default;
};

struct Segmentation {
  std::vector<Segment> segments;

  std::size_t frames() const;
  std::vector<ActionId> frame_labels() const;
  Transcript transcript() const;
  static Segmentation from_frame_labels(std::span<const ActionId> labels);
  bool operator==(const Segmentation&) const = default;
};

struct DecodeOptions {
  // Longest admissible segment; 0 means unbounded (T).
  std::size_t max_segment_length = 0;
};

struct Alignment {
  Segmentation segmentation;
  double score = 0.0;
};

struct SegmentResult {
  std::size_t transcript_index = 0;
  Transcript transcript;
  Segmentation segmentation;
  double score = 0.0;
};

// log Poisson(l; lambda_a). l = 0 is a DomainError.
double duration_logpmf(std::size_t l, ActionId a, const LengthModel& lm);

// Best length assignment for a fixed transcript over T x A log scores.
// Equal scores resolve toward the shorter final segment, recursively.
Alignment align(const Matrix& scores, const Transcript& tr, const LengthModel& lm, const DecodeOptions& opts = {});

// Best transcript of the grammar (align score + log prior). Infeasible
// transcripts are skipped; equal totals keep the earlier grammar entry.
SegmentResult segment(const Matrix& scores, const Grammar& g, const LengthModel& lm, const DecodeOptions& opts = {});

// Log-sum-exp over all length assignments of one transcript (log Z_valid).
double log_partition(const Matrix& scores, const Transcript& tr, const LengthModel& lm, const DecodeOptions& opts = {});
// Log-sum-exp over grammar entries of log prior + log Z_valid (log Z_all).
double log_partition(const Matrix& scores, const Grammar& g, const LengthModel& lm, const DecodeOptions& opts = {});

// Log partition plus its gradient with respect to the scores, i.e. the
// posterior probability that frame t carries label a.
struct Partition {
  double log_z = 0.0;
  Matrix marginals;
};
Partition log_partition_marginals(const Matrix& scores, const Transcript& tr, const LengthModel& lm,
                                  const DecodeOptions& opts = {});
Partition log_partition_marginals(const Matrix& scores, const Grammar& g, const LengthModel& lm,
                                  const DecodeOptions& opts = {});

struct EstimatedModels {
  std::vector<double> prior;
  LengthModel lengths;
  Grammar grammar;
};

// Class prior with add-alpha smoothing, mean segment length per class
// (mean video length over mean segment count for unseen classes), and the
// distinct transcripts under a uniform prior.
EstimatedModels estimate_models(std::span<const Segmentation> corpus, std::size_t num_actions, double alpha = 1.0);

}  // namespace adaact::decode
