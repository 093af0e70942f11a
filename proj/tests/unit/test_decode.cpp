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

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "adaact/decode/decode.hpp"
#include "adaact/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace adaact;
using decode::Segmentation;
using decode::Transcript;

TEST_CASE("duration log pmf") {
  decode::LengthModel lm{{1.0, 4.0, 10.0}};
  CHECK(decode::duration_logpmf(1, 0, lm) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(decode::duration_logpmf(4, 1, lm) == doctest::Approx(4 * std::log(4.0) - 4 - std::log(24.0)).epsilon(1e-14));
  CHECK(decode::duration_logpmf(10, 2, lm) > decode::duration_logpmf(1, 2, lm));
  CHECK_THROWS_AS(decode::duration_logpmf(0, 0, lm), DomainError);
}

TEST_CASE("align forced cases") {
  decode::LengthModel lm{{2.0, 3.0}};
  Matrix one(1, 2, std::vector<double>{0.4, -0.1});
  auto a = decode::align(one, {{1}}, lm);
  CHECK(a.segmentation.segments == std::vector<decode::Segment>{{1, 1}});
  CHECK(a.score == doctest::Approx(-0.1 + decode::duration_logpmf(1, 1, lm)).epsilon(1e-15));

  Matrix three(3, 2, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  auto b = decode::align(three, {{0}}, lm);
  CHECK(b.segmentation.frame_labels() == std::vector<int>{0, 0, 0});
  CHECK(b.score == doctest::Approx(0.9 + decode::duration_logpmf(3, 0, lm)).epsilon(1e-14));

  CHECK_THROWS_AS(decode::align(one, {{0, 1}}, lm), InfeasibleError);
}

TEST_CASE("align and log partition match enumeration") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const bool ties = trial % 2 == 1;
    auto in = gen::decode_instance(rng, ties);
    CAPTURE(trial);
    auto want = oracle::brute_align(in.s, in.tr, in.lm);
    REQUIRE(want.feasible);
    auto got = decode::align(in.s, in.tr, in.lm);
    CHECK(std::abs(got.score - want.score) <= 1e-9);
    CHECK(gen::lengths_of(got.segmentation) == want.lengths);
    CHECK(got.segmentation.transcript() == in.tr);

    const double z = decode::log_partition(in.s, in.tr, in.lm);
    CHECK(std::abs(z - oracle::brute_log_partition(in.s, in.tr, in.lm)) <= 1e-8);
    CHECK(z >= got.score - 1e-12);
  }
}

TEST_CASE("segment and grammar partition match enumeration") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto in = gen::decode_instance(rng, trial % 2 == 1);
    auto g = gen::grammar(rng, in.s.cols);
    CAPTURE(trial);

    auto want = oracle::brute_segment(in.s, g, in.lm);
    std::vector<double> terms;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double z = oracle::brute_log_partition(in.s, g.transcripts[k], in.lm);
      if (z != oracle::kNegInf) terms.push_back(g.log_prior[k] + z);
    }
    if (want.index < 0) {
      CHECK_THROWS_AS(decode::segment(in.s, g, in.lm), InfeasibleError);
      continue;
    }
    auto got = decode::segment(in.s, g, in.lm);
    CHECK(got.transcript_index == static_cast<std::size_t>(want.index));
    CHECK(std::abs(got.score - want.score) <= 1e-9);
    CHECK(gen::lengths_of(got.segmentation) == want.lengths);
    CHECK(std::abs(decode::log_partition(in.s, g, in.lm) - oracle::lse(terms)) <= 1e-8);
  }
}

TEST_CASE("segment examples") {
  std::mt19937_64 rng(44);
  auto s = oracle::random_matrix(6, 3, rng);
  decode::LengthModel lm{{2.0, 2.0, 2.0}};
  decode::Grammar single;
  single.add({{0, 2}}, std::log(0.5));
  auto seg = decode::segment(s, single, lm);
  auto al = decode::align(s, {{0, 2}}, lm);
  CHECK(seg.segmentation == al.segmentation);
  CHECK(seg.score == al.score + std::log(0.5));

  // Action 1 scores -inf everywhere, so only the other transcript survives.
  for (std::size_t t = 0; t < s.rows; ++t) s(t, 1) = oracle::kNegInf;
  auto g = decode::Grammar::uniform({{{1, 0}}, {{2, 0}}});
  CHECK(decode::segment(s, g, lm).transcript_index == 1);
}

TEST_CASE("log partition with one path equals its score") {
  decode::LengthModel lm{{3.0}};
  Matrix one(1, 1, std::vector<double>{0.7});
  CHECK(decode::log_partition(one, Transcript{{0}}, lm) == decode::align(one, {{0}}, lm).score);
}

TEST_CASE("marginals are the gradient of the log partition") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    auto in = gen::decode_instance(rng, false);
    auto part = decode::log_partition_marginals(in.s, in.tr, in.lm);
    CHECK(part.log_z == doctest::Approx(decode::log_partition(in.s, in.tr, in.lm)).epsilon(1e-12));
    for (std::size_t t = 0; t < in.s.rows; ++t) {
      double row = 0.0;
      for (std::size_t a = 0; a < in.s.cols; ++a) {
        row += part.marginals(t, a);
        const double keep = in.s(t, a);
        in.s(t, a) = keep + 1e-6;
        const double up = decode::log_partition(in.s, in.tr, in.lm);
        in.s(t, a) = keep - 1e-6;
        const double down = decode::log_partition(in.s, in.tr, in.lm);
        in.s(t, a) = keep;
        CHECK(oracle::rel_error(part.marginals(t, a), (up - down) / 2e-6) < 1e-4);
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("constant shift leaves the argmax unchanged") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = gen::decode_instance(rng, false);
    auto g = gen::grammar(rng, in.s.cols);
    Matrix shifted = in.s;
    for (auto& v : shifted.data) v += 1.75;
    auto a = decode::align(in.s, in.tr, in.lm), b = decode::align(shifted, in.tr, in.lm);
    CHECK(a.segmentation == b.segmentation);
    CHECK(b.score - a.score == doctest::Approx(1.75 * static_cast<double>(in.s.rows)).epsilon(1e-9));
    try {
      auto sa = decode::segment(in.s, g, in.lm), sb = decode::segment(shifted, g, in.lm);
      CHECK(sa.transcript_index == sb.transcript_index);
      CHECK(sa.segmentation == sb.segmentation);
    } catch (const InfeasibleError&) {
    }
  }
}

TEST_CASE("segment length cap") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = gen::decode_instance(rng, false);
    const std::size_t cap = 1 + trial % 4;
    decode::DecodeOptions opts{cap};
    auto want = oracle::brute_align(in.s, in.tr, in.lm, cap);
    if (!want.feasible) {
      CHECK_THROWS_AS(decode::align(in.s, in.tr, in.lm, opts), InfeasibleError);
      continue;
    }
    auto got = decode::align(in.s, in.tr, in.lm, opts);
    CHECK(std::abs(got.score - want.score) <= 1e-9);
    CHECK(gen::lengths_of(got.segmentation) == want.lengths);
    CHECK(std::abs(decode::log_partition(in.s, in.tr, in.lm, opts) -
                   oracle::brute_log_partition(in.s, in.tr, in.lm, cap)) <= 1e-8);
  }
}

TEST_CASE("estimate models") {
  SUBCASE("single class video") {
    std::vector<Segmentation> corpus{Segmentation{{{1, 7}}}};
    auto est = decode::estimate_models(corpus, 2, 0.0);
    CHECK(est.prior == std::vector<double>{0.0, 1.0});
    CHECK(est.lengths.lambda[1] == 7.0);
    CHECK(est.lengths.lambda[0] == 7.0);
  }
  SUBCASE("duplicate transcripts collapse") {
    std::vector<Segmentation> corpus{Segmentation{{{0, 2}, {1, 3}}}, Segmentation{{{0, 4}, {1, 1}}}};
    auto est = decode::estimate_models(corpus, 2);
    REQUIRE(est.grammar.size() == 1);
    CHECK(est.grammar.log_prior[0] == 0.0);
  }
  SUBCASE("mixed corpus counts") {
    std::vector<Segmentation> corpus{Segmentation{{{0, 2}, {1, 4}, {0, 2}}}, Segmentation{{{2, 3}, {1, 1}}}};
    auto est = decode::estimate_models(corpus, 4, 1.0);
    // Frames: a0=4, a1=5, a2=3, a3=0 out of 12; add-one over 4 classes.
    CHECK(est.prior[0] == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
    CHECK(est.prior[1] == doctest::Approx(6.0 / 16.0).epsilon(1e-15));
    CHECK(est.prior[2] == doctest::Approx(4.0 / 16.0).epsilon(1e-15));
    CHECK(est.prior[3] == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(est.lengths.lambda[0] == 2.0);
    CHECK(est.lengths.lambda[1] == 2.5);
    CHECK(est.lengths.lambda[2] == 3.0);
    // Unseen: mean video length 6 over mean segment count 2.5.
    CHECK(est.lengths.lambda[3] == doctest::Approx(6.0 / 2.5).epsilon(1e-15));
    CHECK(est.grammar.size() == 2);
    CHECK(est.grammar.log_prior[0] == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  }
}

TEST_CASE("segmentation helpers") {
  Segmentation seg{{{2, 2}, {0, 1}, {2, 1}}};
  CHECK(seg.frames() == 4);
  CHECK(seg.frame_labels() == std::vector<int>{2, 2, 0, 2});
  CHECK(seg.transcript() == Transcript{{2, 0, 2}});
  const std::vector<int> labels{2, 2, 0, 2};
  CHECK(Segmentation::from_frame_labels(labels) == seg);
}
