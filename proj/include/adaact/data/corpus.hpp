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
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adaact/decode/decode.hpp"
#include "adaact/hoi/detection.hpp"
#include "adaact/matrix.hpp"

namespace adaact::data {

// ---- frame features -------------------------------------------------------

struct FeatureSequence {
  std::string video_id;
  Matrix x;  // T x F
};

// Binary: "AAFT0001", T and F as u32 LE, then T*F f64 LE row-major.
void write_features(const std::filesystem::path& path, const Matrix& x);
Matrix read_features(const std::filesystem::path& path);
// Every *.feat file of a directory in filename order; video id = file stem.
std::vector<FeatureSequence> read_feature_dir(const std::filesystem::path& dir);

// ---- action names ----------------------------------------------------------

struct ActionMap {
  std::vector<std::string> names;  // index = action id

  decode::ActionId id(const std::string& name) const;  // throws ValidationError
  const std::string& name(decode::ActionId id) const;
  std::size_t size() const { return names.size(); }
};

// `name<TAB>id` per line.
ActionMap read_action_map(const std::filesystem::path& path);
void write_action_map(const std::filesystem::path& path, const ActionMap& actions);

// `video_id<TAB>name name ...` per line.
using TranscriptLine = std::pair<std::string, std::vector<std::string>>;
std::vector<TranscriptLine> read_transcripts(const std::filesystem::path& path);
void write_transcripts(const std::filesystem::path& path, const std::vector<TranscriptLine>& lines);

// ---- segmentation text format ---------------------------------------------

// `video_id<TAB>name:length,name:length,...`; footer lines start with '#'.
struct SegmentationRecord {
  std::string video_id;
  std::vector<std::pair<std::string, std::size_t>> segments;
};

struct SegmentationFile {
  std::vector<SegmentationRecord> records;
  // Footer `# score<TAB>video_id<TAB>value`.
  std::vector<std::pair<std::string, double>> scores;
};

SegmentationRecord to_record(const std::string& video_id, const decode::Segmentation& seg, const ActionMap& actions);
decode::Segmentation from_record(const SegmentationRecord& rec, const ActionMap& actions);

void write_segmentation_file(std::ostream& out, const SegmentationFile& file);
SegmentationFile parse_segmentation_file(std::istream& in);
void save_segmentation_file(const std::filesystem::path& path, const SegmentationFile& file);
SegmentationFile load_segmentation_file(const std::filesystem::path& path);

// ---- corpus directory -------------------------------------------------------

struct Video {
  std::string id;
  Matrix features;
  std::vector<hoi::HoiDetection> detections;
  decode::Transcript transcript;
  std::optional<decode::Segmentation> ground_truth;
};

struct Corpus {
  ActionMap actions;
  std::size_t embedding_dim = 0;
  std::vector<Video> videos;

  std::size_t feature_dim() const { return videos.empty() ? 0 : videos.front().features.cols; }
};

// Layout: actions.txt, transcripts.txt, features/<id>.feat,
// detections/<id>.jsonl, gt/<id>.seg (optional).
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace adaact::data
