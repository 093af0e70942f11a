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

#include <algorithm>
#include <random>
#include <sstream>

#include "adaact/errors.hpp"
#include "adaact/hoi/detection.hpp"
#include "adaact/hoi/integrator.hpp"
#include "adaact/hoi/video_nms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace adaact;
using hoi::HoiDetection;

namespace {

HoiDetection det(long t, hoi::Box obj, double score, std::vector<double> emb = {}) {
  return {t, {0, 0, 10, 10}, obj, score, std::move(emb)};
}

std::string header(std::size_t dim) {
  return "{\"version\":1,\"embedding_dim\":" + std::to_string(dim) + ",\"video_id\":\"v\"}\n";
}

hoi::IntegratorParams small_integrator(std::uint64_t seed, std::size_t k = 5) {
  hoi::IntegratorConfig cfg;
  cfg.embedding_dim = 4;
  cfg.model_dim = 8;
  cfg.output_dim = 8;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.mlp_dim = 12;
  cfg.max_items = k;
  std::mt19937_64 rng(seed);
  return hoi::IntegratorParams::init(cfg, rng);
}

}  // namespace

TEST_CASE("iou examples") {
  CHECK(hoi::iou({0, 0, 2, 2}, {0, 0, 2, 2}) == 1.0);
  CHECK(hoi::iou({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
  CHECK(hoi::iou({0, 0, 2, 2}, {1, 0, 3, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("detection file parsing") {
  SUBCASE("empty body") {
    std::istringstream in(header(2));
    auto f = hoi::parse_detections(in);
    CHECK(f.detections.empty());
    CHECK(f.embedding_dim == 2);
    CHECK(f.video_id == "v");
  }
  SUBCASE("one valid line") {
    std::istringstream in(header(2) +
                          R"({"t":3,"hand_box":[0,0,1,1],"obj_box":[1,1,2,3],"score":0.7,"embedding":[0.5,-1]})" "\n");
    auto f = hoi::parse_detections(in);
    REQUIRE(f.detections.size() == 1);
    CHECK(f.detections[0].t == 3);
    CHECK(f.detections[0].obj_box == hoi::Box{1, 1, 2, 3});
    CHECK(f.detections[0].embedding == std::vector<double>{0.5, -1});
  }
  SUBCASE("score out of range") {
    std::istringstream in(header(1) +
                          R"({"t":3,"hand_box":[0,0,1,1],"obj_box":[1,1,2,3],"score":1.3,"embedding":[0]})" "\n");
    CHECK_THROWS_AS(hoi::parse_detections(in), ValidationError);
  }
  SUBCASE("degenerate box") {
    std::istringstream in(header(1) +
                          R"({"t":3,"hand_box":[0,0,0,1],"obj_box":[1,1,2,3],"score":0.6,"embedding":[0]})" "\n");
    CHECK_THROWS_AS(hoi::parse_detections(in), ValidationError);
  }
  SUBCASE("malformed line reports its number") {
    std::istringstream in(header(1) + R"({"t":1,"hand_box":[0,0,1,1],"obj_box":[0,0,1,1],"score":0.6,"embedding":[0]})" "\n{oops\n");
    try {
      hoi::parse_detections(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("embedding length mismatch") {
    std::istringstream in(header(2) +
                          R"({"t":3,"hand_box":[0,0,1,1],"obj_box":[1,1,2,3],"score":0.6,"embedding":[0]})" "\n");
    CHECK_THROWS_AS(hoi::parse_detections(in), FormatError);
  }
}

TEST_CASE("detection file round trip") {
  std::mt19937_64 rng(3);
  hoi::DetectionFile f{"clip", 3, gen::detections(rng, 6, 3)};
  std::stringstream buf;
  hoi::write_detections(buf, f);
  auto back = hoi::parse_detections(buf);
  CHECK(back.video_id == f.video_id);
  CHECK(back.embedding_dim == 3);
  REQUIRE(back.detections.size() == f.detections.size());
  for (std::size_t i = 0; i < f.detections.size(); ++i) {
    CHECK(back.detections[i].t == f.detections[i].t);
    CHECK(back.detections[i].hand_box == f.detections[i].hand_box);
    CHECK(back.detections[i].obj_box == f.detections[i].obj_box);
    CHECK(back.detections[i].score == f.detections[i].score);
    CHECK(back.detections[i].embedding == f.detections[i].embedding);
  }
}

TEST_CASE("video nms examples") {
  auto one = hoi::video_nms({det(5, {0, 0, 4, 4}, 0.9)}, 0.5, 30, 10);
  CHECK(one.items.size() == 1);

  auto dup = hoi::video_nms({det(5, {0, 0, 4, 4}, 0.8), det(5, {0, 0, 4, 4}, 0.9)}, 0.5, 30, 10);
  REQUIRE(dup.items.size() == 1);
  CHECK(dup.items[0].score == 0.9);

  auto apart = hoi::video_nms({det(5, {0, 0, 4, 4}, 0.9), det(500, {0, 0, 4, 4}, 0.8)}, 0.5, 30, 10);
  CHECK(apart.items.size() == 2);

  // |dt| equal to the gap releases suppression; low IoU keeps as well.
  CHECK(hoi::video_nms({det(0, {0, 0, 4, 4}, 0.9), det(30, {0, 0, 4, 4}, 0.8)}, 0.5, 30, 10).items.size() == 2);
  CHECK(hoi::video_nms({det(0, {0, 0, 4, 4}, 0.9), det(1, {3, 3, 7, 7}, 0.8)}, 0.5, 30, 10).items.size() == 2);

  CHECK_THROWS_AS(hoi::video_nms({}, 1.0, 30, 10), ConfigError);
  CHECK_THROWS_AS(hoi::video_nms({}, 0.5, 30, 0), ConfigError);
}

TEST_CASE("video nms output order and ties") {
  // Equal scores: the earlier detection is taken and suppresses the later one.
  auto tie = hoi::video_nms({det(9, {0, 0, 4, 4}, 0.7), det(2, {0, 0, 4, 4}, 0.7)}, 0.5, 30, 10);
  REQUIRE(tie.items.size() == 1);
  CHECK(tie.items[0].t == 2);

  auto sel = hoi::video_nms({det(40, {0, 0, 4, 4}, 0.6), det(3, {10, 10, 14, 14}, 0.9), det(3, {20, 20, 24, 24}, 0.95)},
                            0.5, 30, 10);
  REQUIRE(sel.items.size() == 3);
  CHECK(sel.items[0].score == 0.95);
  CHECK(sel.items[1].score == 0.9);
  CHECK(sel.items[2].t == 40);
}

TEST_CASE("video nms matches the greedy reference") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    auto dets = gen::detections(rng, 20, 0);
    auto got = hoi::video_nms(dets, 0.5, 30, 10);
    auto want = oracle::reference_nms(dets, 0.5, 30, 10);
    REQUIRE(got.items.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.items[i].t == dets[want[i]].t);
      CHECK(got.items[i].score == dets[want[i]].score);
      CHECK(got.items[i].obj_box == dets[want[i]].obj_box);
    }
    // No surviving pair violates both thresholds.
    for (std::size_t i = 0; i < got.items.size(); ++i) {
      for (std::size_t j = i + 1; j < got.items.size(); ++j) {
        const bool close = std::abs(got.items[i].t - got.items[j].t) < 30;
        CHECK_FALSE((close && hoi::iou(got.items[i].obj_box, got.items[j].obj_box) > 0.5));
      }
    }
  }
}

TEST_CASE("score filter and selection") {
  std::vector<HoiDetection> dets{det(1, {0, 0, 4, 4}, 0.4), det(2, {10, 10, 14, 14}, 0.5), det(3, {20, 0, 24, 4}, 0.8)};
  CHECK(hoi::filter_by_score(dets, 0.5).size() == 2);
  hoi::NmsConfig cfg;
  cfg.top_k = 1;
  auto sel = hoi::select_interactions(dets, cfg);
  REQUIRE(sel.items.size() == 1);
  CHECK(sel.items[0].score == 0.8);
}

TEST_CASE("integrator handles zero to K items deterministically") {
  auto params = small_integrator(5);
  std::mt19937_64 rng(6);
  auto dets = gen::detections(rng, 5, 4);
  for (std::size_t n = 0; n <= 5; ++n) {
    hoi::HoiSelection sel{{dets.begin(), dets.begin() + static_cast<long>(n)}};
    auto a = hoi::integrate(sel, params);
    auto b = hoi::integrate(sel, params);
    CHECK(a.size() == 8);
    CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
          std::vector<double>(b.values().begin(), b.values().end()));
    for (double v : a.values()) CHECK(std::isfinite(v));
  }
  hoi::HoiSelection too_many{gen::detections(rng, 6, 4)};
  CHECK_THROWS_AS(hoi::integrate(too_many, params), ConfigError);
  hoi::HoiSelection wrong_dim{gen::detections(rng, 2, 3)};
  CHECK_THROWS_AS(hoi::integrate(wrong_dim, params), ConfigError);
}

TEST_CASE("integrator permutation behaviour") {
  auto params = small_integrator(8);
  std::mt19937_64 rng(9);
  auto dets = gen::detections(rng, 5, 4);
  hoi::HoiSelection sel{dets};
  auto perm = dets;
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[0], perm[2]);
  hoi::HoiSelection shuffled{perm};

  auto diff = [&] {
    auto a = hoi::integrate(sel, params), b = hoi::integrate(shuffled, params);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.at(i) - b.at(i)));
    return m;
  };
  CHECK(diff() > 1e-6);
  for (auto& v : params.position.mutable_values()) v = 0.0;
  CHECK(diff() <= 1e-10);
}

TEST_CASE("integrator gradients") {
  auto params = small_integrator(10, 4);
  std::mt19937_64 rng(11);
  // Perturb every group away from its initial constants (unit gains, zero
  // shifts) so each one carries signal.
  std::normal_distribution<double> unit(0.0, 0.3);
  for (const auto& [name, t] : params.named_parameters()) {
    auto shared = t;
    for (auto& v : shared.mutable_values()) v += unit(rng);
  }
  hoi::HoiSelection sel{gen::detections(rng, 3, 4)};
  for (const auto& [name, t] : params.named_parameters()) {
    CAPTURE(name);
    auto r = oracle::check_gradients([&] { return oracle::project(hoi::integrate(sel, params), 12); }, {t});
    if (name.ends_with(".bk")) {
      // A key shift is the same for every key and cancels in the softmax,
      // so both gradients are zero up to rounding.
      CHECK(r.max_abs_error < 1e-8);
    } else {
      CHECK(r.max_rel_error < 1e-4);
    }
  }
}
