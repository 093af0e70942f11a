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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "adaact/data/corpus.hpp"
#include "adaact/data/synth.hpp"
#include "adaact/errors.hpp"
#include "oracles.hpp"

using namespace adaact;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory under the system temp dir, removed on scope exit.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("adaact_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string le32(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

data::SynthConfig small_synth() {
  auto cfg = data::SynthConfig::defaults();
  cfg.videos_per_activity = 3;
  cfg.t_min = 30;
  cfg.t_max = 60;
  return cfg;
}

}  // namespace

TEST_CASE("feature files") {
  ScratchDir dir("features");
  std::mt19937_64 rng(1);
  auto x = oracle::random_matrix(7, 3, rng);
  data::write_features(dir.path / "a.feat", x);
  CHECK(data::read_features(dir.path / "a.feat") == x);

  // Byte layout: magic, T, F, then little-endian doubles.
  const auto bytes = read_bytes(dir.path / "a.feat");
  CHECK(bytes.size() == 8 + 4 + 4 + 7 * 3 * 8);
  CHECK(bytes.substr(0, 8) == "AAFT0001");
  CHECK(bytes.substr(8, 8) == le32(7) + le32(3));

  write_bytes(dir.path / "empty.bin", "AAFT0001" + le32(0) + le32(3));
  CHECK_THROWS_AS(data::read_features(dir.path / "empty.bin"), ValidationError);
  write_bytes(dir.path / "magic.bin", "AAFT0002" + le32(1) + le32(1) + std::string(8, '\0'));
  CHECK_THROWS_AS(data::read_features(dir.path / "magic.bin"), FormatError);
  write_bytes(dir.path / "short.bin", "AAFT0001" + le32(2) + le32(1) + std::string(8, '\0'));
  CHECK_THROWS_AS(data::read_features(dir.path / "short.bin"), FormatError);

  data::write_features(dir.path / "b.feat", oracle::random_matrix(2, 3, rng));
  fs::remove(dir.path / "empty.bin");
  auto all = data::read_feature_dir(dir.path);
  REQUIRE(all.size() == 2);
  CHECK(all[0].video_id == "a");
  CHECK(all[1].video_id == "b");
}

TEST_CASE("action map and transcripts") {
  ScratchDir dir("text");
  data::ActionMap map{{"SIL", "cut", "fry"}};
  data::write_action_map(dir.path / "actions.txt", map);
  CHECK(read_bytes(dir.path / "actions.txt") == "SIL\t0\ncut\t1\nfry\t2\n");
  auto back = data::read_action_map(dir.path / "actions.txt");
  CHECK(back.names == map.names);
  CHECK(back.id("fry") == 2);
  CHECK(back.name(1) == "cut");
  CHECK_THROWS_AS(back.id("boil"), ValidationError);

  write_bytes(dir.path / "gap.txt", "a\t0\nb\t2\n");
  CHECK_THROWS_AS(data::read_action_map(dir.path / "gap.txt"), FormatError);

  std::vector<data::TranscriptLine> lines{{"v1", {"SIL", "cut", "SIL"}}, {"v2", {"fry"}}};
  data::write_transcripts(dir.path / "tr.txt", lines);
  CHECK(read_bytes(dir.path / "tr.txt") == "v1\tSIL cut SIL\nv2\tfry\n");
  CHECK(data::read_transcripts(dir.path / "tr.txt") == lines);

  write_bytes(dir.path / "bad.txt", "v1\tcut\nnotab\n");
  try {
    data::read_transcripts(dir.path / "bad.txt");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("segmentation text format") {
  data::ActionMap map{{"SIL", "cut"}};
  decode::Segmentation seg{{{0, 3}, {1, 5}, {0, 2}}};
  data::SegmentationFile file{{data::to_record("v", seg, map)}, {{"v", -12.5}}};
  std::stringstream buf;
  data::write_segmentation_file(buf, file);
  CHECK(buf.str().starts_with("v\tSIL:3,cut:5,SIL:2\n"));
  auto back = data::parse_segmentation_file(buf);
  REQUIRE(back.records.size() == 1);
  CHECK(data::from_record(back.records[0], map) == seg);
  REQUIRE(back.scores.size() == 1);
  CHECK(back.scores[0].second == -12.5);

  std::istringstream bad("v\tSIL:0\n");
  CHECK_THROWS_AS(data::parse_segmentation_file(bad), ParseError);
}

TEST_CASE("synthetic corpus is deterministic and well formed") {
  auto cfg = small_synth();
  auto a = data::generate_corpus(cfg);
  auto b = data::generate_corpus(cfg);
  REQUIRE(a.corpus.videos.size() == 6);
  for (std::size_t i = 0; i < a.corpus.videos.size(); ++i) {
    const auto& va = a.corpus.videos[i];
    const auto& vb = b.corpus.videos[i];
    CHECK(va.features == vb.features);
    CHECK(va.transcript == vb.transcript);
    CHECK(*va.ground_truth == *vb.ground_truth);
    REQUIRE(va.detections.size() == vb.detections.size());
    for (std::size_t k = 0; k < va.detections.size(); ++k) {
      CHECK(va.detections[k].embedding == vb.detections[k].embedding);
      CHECK(va.detections[k].score == vb.detections[k].score);
    }

    std::size_t total = 0;
    for (const auto& s : va.ground_truth->segments) {
      CHECK(s.length >= 1);
      total += s.length;
    }
    CHECK(total == va.features.rows);
    CHECK(va.ground_truth->transcript() == va.transcript);
    CHECK(va.detections.size() >= cfg.hoi_min_events);
    CHECK(va.detections.size() <= cfg.hoi_max_events);
    for (const auto& d : va.detections) {
      CHECK(d.score >= 0.5);
      CHECK(d.score <= 1.0);
      CHECK(d.t >= 0);
      CHECK(d.t < static_cast<long>(va.features.rows));
    }
  }
  cfg.seed = 1;
  CHECK_FALSE(data::generate_corpus(cfg).corpus.videos[0].features == a.corpus.videos[0].features);
}

TEST_CASE("noise-free features are separable without ambiguous pairs") {
  auto cfg = small_synth();
  cfg.sigma_feat = 0.0;
  cfg.ambiguous_pairs.clear();
  auto sc = data::generate_corpus(cfg);
  std::size_t frames = 0, correct = 0;
  for (const auto& v : sc.corpus.videos) {
    const auto labels = v.ground_truth->frame_labels();
    for (std::size_t t = 0; t < v.features.rows; ++t) {
      std::size_t best = 0;
      double best_d = INFINITY;
      for (std::size_t a = 0; a < sc.action_means.size(); ++a) {
        double d = 0.0;
        for (std::size_t f = 0; f < v.features.cols; ++f) {
          d += std::pow(v.features(t, f) - sc.action_means[a][f], 2);
        }
        if (d < best_d) {
          best_d = d;
          best = a;
        }
      }
      ++frames;
      correct += static_cast<int>(best) == labels[t];
    }
  }
  CHECK(correct == frames);
}

TEST_CASE("ambiguous pair shares its features but not its context") {
  auto cfg = data::SynthConfig::defaults();
  auto sc = data::generate_corpus(cfg);
  const auto& map = sc.corpus.actions;
  const auto a = static_cast<std::size_t>(map.id("pour_coffee"));
  const auto b = static_cast<std::size_t>(map.id("pour_juice"));
  CHECK(sc.action_means[a] == sc.action_means[b]);

  // Two-sample z statistic per feature dimension.
  const std::size_t f = cfg.feature_dim;
  std::vector<double> sum_a(f), sum_b(f);
  double n_a = 0, n_b = 0;
  for (const auto& v : sc.corpus.videos) {
    const auto labels = v.ground_truth->frame_labels();
    for (std::size_t t = 0; t < labels.size(); ++t) {
      const auto l = static_cast<std::size_t>(labels[t]);
      if (l != a && l != b) continue;
      auto& sum = l == a ? sum_a : sum_b;
      (l == a ? n_a : n_b) += 1;
      for (std::size_t k = 0; k < f; ++k) sum[k] += v.features(t, k);
    }
  }
  REQUIRE(n_a > 0);
  REQUIRE(n_b > 0);
  const double se = cfg.sigma_feat * std::sqrt(1.0 / n_a + 1.0 / n_b);
  for (std::size_t k = 0; k < f; ++k) CHECK(std::abs(sum_a[k] / n_a - sum_b[k] / n_b) / se < 4.0);

  REQUIRE(sc.hoi_means.size() == 2);
  double dist = 0.0;
  for (std::size_t k = 0; k < cfg.embedding_dim; ++k) dist += std::pow(sc.hoi_means[0][k] - sc.hoi_means[1][k], 2);
  CHECK(std::sqrt(dist) >= 4.0 * cfg.sigma_hoi);
}

TEST_CASE("corpus directory round trip") {
  ScratchDir dir("corpus");
  auto sc = data::generate_corpus(small_synth());
  data::write_corpus(dir.path, sc.corpus);
  CHECK(fs::exists(dir.path / "actions.txt"));
  CHECK(fs::exists(dir.path / "transcripts.txt"));
  auto back = data::load_corpus(dir.path);
  CHECK(back.actions.names == sc.corpus.actions.names);
  CHECK(back.embedding_dim == sc.corpus.embedding_dim);
  REQUIRE(back.videos.size() == sc.corpus.videos.size());
  // Loading order is by file name; match by id.
  for (const auto& v : sc.corpus.videos) {
    auto it = std::find_if(back.videos.begin(), back.videos.end(), [&](const auto& w) { return w.id == v.id; });
    REQUIRE(it != back.videos.end());
    CHECK(it->features == v.features);
    CHECK(it->transcript == v.transcript);
    REQUIRE(it->ground_truth.has_value());
    CHECK(*it->ground_truth == *v.ground_truth);
    REQUIRE(it->detections.size() == v.detections.size());
    for (std::size_t k = 0; k < v.detections.size(); ++k) {
      CHECK(it->detections[k].embedding == v.detections[k].embedding);
      CHECK(it->detections[k].obj_box == v.detections[k].obj_box);
      CHECK(it->detections[k].t == v.detections[k].t);
    }
  }
  CHECK_THROWS_AS(data::load_corpus(dir.path / "missing"), FormatError);
}
