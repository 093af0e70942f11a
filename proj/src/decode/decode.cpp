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

#include "adaact/decode/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "adaact/errors.hpp"

namespace adaact::decode {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming-free log-sum-exp over a small buffer; -inf when empty or all -inf.
double lse(const std::vector<double>& v) {
  if (v.empty()) return kNegInf;
  double mx = *std::max_element(v.begin(), v.end());
  if (mx == kNegInf) return kNegInf;
  double total = 0.0;
  for (double x : v) {
    // exp(-50) is below double precision relative to the max term.
    if (x - mx > -50.0) total += std::exp(x - mx);
  }
  return mx + std::log(total);
}

// Scores this close to the best count as tied. Differences this small only
// come from summation order, so tie-breaks stay stable under rounding.
bool near(double a, double b) { return std::abs(a - b) <= 1e-11 * (1.0 + std::abs(b)); }

// Shared setup for every recurrence over one transcript.
struct Lattice {
  const Matrix& scores;
  const Transcript& tr;
  std::size_t frames;
  std::size_t segments;
  std::size_t max_len;
  std::vector<std::vector<double>> duration;  // duration[o][l], l in 1..max_len

  Lattice(const Matrix& s, const Transcript& t, const LengthModel& lm, const DecodeOptions& opts)
      : scores(s), tr(t), frames(s.rows), segments(t.size()) {
    if (segments == 0) throw DomainError("transcript is empty");
    for (ActionId a : tr.actions) {
      if (a < 0 || static_cast<std::size_t>(a) >= s.cols) {
        throw IndexError("transcript action " + std::to_string(a) + " outside score columns");
      }
    }
    max_len = opts.max_segment_length == 0 ? frames : std::min(opts.max_segment_length, frames);
    duration.resize(segments);
    for (std::size_t o = 0; o < segments; ++o) {
      auto it = std::find(tr.actions.begin(), tr.actions.begin() + static_cast<long>(o), tr.actions[o]);
      if (it != tr.actions.begin() + static_cast<long>(o)) {
        duration[o] = duration[static_cast<std::size_t>(it - tr.actions.begin())];
        continue;
      }
      duration[o].assign(max_len + 1, kNegInf);
      for (std::size_t l = 1; l <= max_len; ++l) duration[o][l] = duration_logpmf(l, tr.actions[o], lm);
    }
  }

  bool feasible() const { return segments <= frames && segments * max_len >= frames; }
  double score(std::size_t t, std::size_t o) const { return scores(t, static_cast<std::size_t>(tr.actions[o])); }

  // Smallest and largest admissible segment end for segment o (1-based count).
  std::size_t first_end(std::size_t o) const { return o; }
  std::size_t last_end(std::size_t o) const { return frames - (segments - o); }
};

void require_feasible(const Lattice& lat) {
  if (!lat.feasible()) {
    throw InfeasibleError("transcript of " + std::to_string(lat.segments) + " actions cannot cover " +
                          std::to_string(lat.frames) + " frames with segments of at most " +
                          std::to_string(lat.max_len));
  }
}

// alpha[o][j]: log-sum over ways to cover frames [0, j) with the first o segments.
std::vector<std::vector<double>> forward(const Lattice& lat) {
  const std::size_t T = lat.frames, O = lat.segments;
  std::vector<std::vector<double>> alpha(O + 1, std::vector<double>(T + 1, kNegInf));
  alpha[0][0] = 0.0;
  std::vector<double> buf;
  for (std::size_t o = 1; o <= O; ++o) {
    for (std::size_t j = lat.first_end(o); j <= lat.last_end(o); ++j) {
      buf.clear();
      double seg = 0.0;
      const std::size_t lmax = std::min(lat.max_len, j - (o - 1));
      for (std::size_t l = 1; l <= lmax; ++l) {
        const std::size_t i = j - l;
        seg += lat.score(i, o - 1);
        if (alpha[o - 1][i] == kNegInf) continue;
        buf.push_back(alpha[o - 1][i] + seg + lat.duration[o - 1][l]);
      }
      alpha[o][j] = lse(buf);
    }
  }
  return alpha;
}

// beta[o][i]: log-sum over ways to cover frames [i, T) with segments o+1..O.
std::vector<std::vector<double>> backward(const Lattice& lat) {
  const std::size_t T = lat.frames, O = lat.segments;
  std::vector<std::vector<double>> beta(O + 1, std::vector<double>(T + 1, kNegInf));
  beta[O][T] = 0.0;
  std::vector<double> buf;
  for (std::size_t o = O; o-- > 0;) {
    for (std::size_t i = o; i + (O - o) <= T; ++i) {
      buf.clear();
      double seg = 0.0;
      for (std::size_t l = 1; l <= lat.max_len && i + l <= T; ++l) {
        seg += lat.score(i + l - 1, o);
        if (beta[o + 1][i + l] == kNegInf) continue;
        buf.push_back(seg + lat.duration[o][l] + beta[o + 1][i + l]);
      }
      beta[o][i] = lse(buf);
    }
  }
  return beta;
}

}  // namespace

Grammar Grammar::uniform(std::vector<Transcript> transcripts) {
  Grammar g;
  const double lp = transcripts.empty() ? 0.0 : -std::log(static_cast<double>(transcripts.size()));
  for (auto& tr : transcripts) g.add(std::move(tr), lp);
  return g;
}

void Grammar::add(Transcript tr, double log_prior_value) {
  transcripts.push_back(std::move(tr));
  log_prior.push_back(log_prior_value);
}

long Grammar::find(const Transcript& tr) const {
  auto it = std::find(transcripts.begin(), transcripts.end(), tr);
  return it == transcripts.end() ? -1 : static_cast<long>(it - transcripts.begin());
}

std::size_t Segmentation::frames() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.length;
  return n;
}

std::vector<ActionId> Segmentation::frame_labels() const {
  std::vector<ActionId> labels;
  labels.reserve(frames());
  for (const auto& s : segments) labels.insert(labels.end(), s.length, s.action);
  return labels;
}

Transcript Segmentation::transcript() const {
  Transcript tr;
  for (const auto& s : segments) tr.actions.push_back(s.action);
  return tr;
}

Segmentation Segmentation::from_frame_labels(std::span<const ActionId> labels) {
  Segmentation seg;
  for (ActionId a : labels) {
    if (!seg.segments.empty() && seg.segments.back().action == a) {
      ++seg.segments.back().length;
    } else {
      seg.segments.push_back({a, 1});
    }
  }
  return seg;
}

double duration_logpmf(std::size_t l, ActionId a, const LengthModel& lm) {
  if (l == 0) throw DomainError("duration_logpmf: length must be at least 1");
  if (a < 0 || static_cast<std::size_t>(a) >= lm.lambda.size()) throw IndexError("duration_logpmf: unknown action");
  const double lambda = lm.lambda[static_cast<std::size_t>(a)];
  if (!(lambda > 0.0)) throw DomainError("duration_logpmf: lambda must be positive");
  const double dl = static_cast<double>(l);
  return dl * std::log(lambda) - lambda - std::lgamma(dl + 1.0);
}

Alignment align(const Matrix& scores, const Transcript& tr, const LengthModel& lm, const DecodeOptions& opts) {
  Lattice lat(scores, tr, lm, opts);
  require_feasible(lat);
  const std::size_t T = lat.frames, O = lat.segments;

  std::vector<std::vector<double>> best(O + 1, std::vector<double>(T + 1, kNegInf));
  // back[o][j] = length of segment o ending at j; 0 marks an unreachable state.
  std::vector<std::vector<std::size_t>> back(O + 1, std::vector<std::size_t>(T + 1, 0));
  best[0][0] = 0.0;
  auto reachable = [&](std::size_t o, std::size_t j) { return o == 0 ? j == 0 : back[o][j] != 0; };

  std::vector<double> cand(lat.max_len + 1);
  for (std::size_t o = 1; o <= O; ++o) {
    for (std::size_t j = lat.first_end(o); j <= lat.last_end(o); ++j) {
      double seg = 0.0, top = kNegInf;
      const std::size_t lmax = std::min(lat.max_len, j - (o - 1));
      for (std::size_t l = 1; l <= lmax; ++l) {
        const std::size_t i = j - l;
        seg += lat.score(i, o - 1);
        cand[l] = reachable(o - 1, i) ? best[o - 1][i] + seg + lat.duration[o - 1][l] : kNegInf;
        top = std::max(top, cand[l]);
      }
      // Shortest final segment among the (near-)best candidates.
      for (std::size_t l = 1; l <= lmax; ++l) {
        if (cand[l] == kNegInf || !(cand[l] == top || near(cand[l], top))) continue;
        best[o][j] = cand[l];
        back[o][j] = l;
        break;
      }
    }
  }

  Alignment out;
  out.score = best[O][T];
  out.segmentation.segments.resize(O);
  std::size_t j = T;
  for (std::size_t o = O; o >= 1; --o) {
    const std::size_t l = back[o][j];
    out.segmentation.segments[o - 1] = {tr.actions[o - 1], l};
    j -= l;
  }
  return out;
}

SegmentResult segment(const Matrix& scores, const Grammar& g, const LengthModel& lm, const DecodeOptions& opts) {
  if (g.empty()) throw DomainError("segment: empty grammar");
  SegmentResult best;
  bool found = false;
  std::vector<std::optional<Alignment>> aligned(g.size());
  double top = kNegInf;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!Lattice(scores, g.transcripts[k], lm, opts).feasible()) continue;
    aligned[k] = align(scores, g.transcripts[k], lm, opts);
    top = std::max(top, aligned[k]->score + g.log_prior[k]);
    found = true;
  }
  // Earliest grammar entry among the (near-)best totals.
  for (std::size_t k = 0; found && k < g.size(); ++k) {
    if (!aligned[k]) continue;
    const double total = aligned[k]->score + g.log_prior[k];
    if (total == top || near(total, top)) {
      best = {k, g.transcripts[k], std::move(aligned[k]->segmentation), total};
      break;
    }
  }
  if (!found) throw InfeasibleError("segment: no grammar transcript fits " + std::to_string(scores.rows) + " frames");
  return best;
}

double log_partition(const Matrix& scores, const Transcript& tr, const LengthModel& lm, const DecodeOptions& opts) {
  Lattice lat(scores, tr, lm, opts);
  require_feasible(lat);
  return forward(lat)[lat.segments][lat.frames];
}

double log_partition(const Matrix& scores, const Grammar& g, const LengthModel& lm, const DecodeOptions& opts) {
  if (g.empty()) throw DomainError("log_partition: empty grammar");
  std::vector<double> terms;
  for (std::size_t k = 0; k < g.size(); ++k) {
    Lattice lat(scores, g.transcripts[k], lm, opts);
    if (!lat.feasible()) continue;
    terms.push_back(g.log_prior[k] + forward(lat)[lat.segments][lat.frames]);
  }
  if (terms.empty()) throw InfeasibleError("log_partition: no grammar transcript fits the sequence");
  return lse(terms);
}

Partition log_partition_marginals(const Matrix& scores, const Transcript& tr, const LengthModel& lm,
                                  const DecodeOptions& opts) {
  Lattice lat(scores, tr, lm, opts);
  require_feasible(lat);
  const std::size_t T = lat.frames, O = lat.segments;
  auto alpha = forward(lat);
  auto beta = backward(lat);

  Partition out;
  out.log_z = alpha[O][T];
  out.marginals = Matrix(T, scores.cols, 0.0);
  if (out.log_z == kNegInf) return out;

  std::vector<double> diff(T + 1);
  for (std::size_t o = 1; o <= O; ++o) {
    std::fill(diff.begin(), diff.end(), 0.0);
    for (std::size_t i = o - 1; i < T; ++i) {
      if (alpha[o - 1][i] == kNegInf) continue;
      double seg = 0.0;
      for (std::size_t l = 1; l <= lat.max_len && i + l <= T; ++l) {
        const std::size_t j = i + l;
        seg += lat.score(j - 1, o - 1);
        if (beta[o][j] == kNegInf) continue;
        const double log_p = alpha[o - 1][i] + seg + lat.duration[o - 1][l] + beta[o][j] - out.log_z;
        if (log_p < -50.0) continue;
        const double p = std::exp(log_p);
        diff[i] += p;
        diff[j] -= p;
      }
    }
    const auto a = static_cast<std::size_t>(tr.actions[o - 1]);
    double running = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      running += diff[t];
      out.marginals(t, a) += running;
    }
  }
  return out;
}

Partition log_partition_marginals(const Matrix& scores, const Grammar& g, const LengthModel& lm,
                                  const DecodeOptions& opts) {
  if (g.empty()) throw DomainError("log_partition: empty grammar");
  std::vector<Partition> parts;
  std::vector<double> weights;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!Lattice(scores, g.transcripts[k], lm, opts).feasible()) continue;
    parts.push_back(log_partition_marginals(scores, g.transcripts[k], lm, opts));
    weights.push_back(g.log_prior[k] + parts.back().log_z);
  }
  if (parts.empty()) throw InfeasibleError("log_partition: no grammar transcript fits the sequence");

  Partition out;
  out.log_z = lse(weights);
  out.marginals = Matrix(scores.rows, scores.cols, 0.0);
  if (out.log_z == kNegInf) return out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const double w = std::exp(weights[k] - out.log_z);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < out.marginals.data.size(); ++i) out.marginals.data[i] += w * parts[k].marginals.data[i];
  }
  return out;
}

EstimatedModels estimate_models(std::span<const Segmentation> corpus, std::size_t num_actions, double alpha) {
  if (corpus.empty()) throw DomainError("estimate_models: empty corpus");
  std::vector<double> frame_count(num_actions, 0.0);
  std::vector<double> length_sum(num_actions, 0.0);
  std::vector<double> segment_count(num_actions, 0.0);
  double total_frames = 0.0, total_segments = 0.0;
  std::vector<Transcript> distinct;

  for (const auto& seg : corpus) {
    for (const auto& s : seg.segments) {
      if (s.action < 0 || static_cast<std::size_t>(s.action) >= num_actions) {
        throw IndexError("estimate_models: action id outside [0, A)");
      }
      const auto a = static_cast<std::size_t>(s.action);
      frame_count[a] += static_cast<double>(s.length);
      length_sum[a] += static_cast<double>(s.length);
      segment_count[a] += 1.0;
      total_frames += static_cast<double>(s.length);
      total_segments += 1.0;
    }
    Transcript tr = seg.transcript();
    if (std::find(distinct.begin(), distinct.end(), tr) == distinct.end()) distinct.push_back(std::move(tr));
  }

  EstimatedModels out;
  const double denom = total_frames + alpha * static_cast<double>(num_actions);
  out.prior.resize(num_actions);
  for (std::size_t a = 0; a < num_actions; ++a) out.prior[a] = (frame_count[a] + alpha) / denom;

  const double fallback = total_segments > 0.0 ? total_frames / total_segments : 1.0;
  out.lengths.lambda.resize(num_actions);
  for (std::size_t a = 0; a < num_actions; ++a) {
    out.lengths.lambda[a] = segment_count[a] > 0.0 ? length_sum[a] / segment_count[a] : fallback;
  }
  out.grammar = Grammar::uniform(std::move(distinct));
  return out;
}

}  // namespace adaact::decode
