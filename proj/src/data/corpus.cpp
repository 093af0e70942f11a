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

#include "adaact/data/corpus.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "adaact/errors.hpp"

namespace adaact::data {
namespace {

namespace fs = std::filesystem;
constexpr char kFeatureMagic[8] = {'A', 'A', 'F', 'T', '0', '0', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) return false;
  v = static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
      static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
  return true;
}

bool get_f64(std::istream& in, double& v) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = bits << 8 | b[static_cast<std::size_t>(i)];
  v = std::bit_cast<double>(bits);
  return true;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_features(const fs::path& path, const Matrix& x) {
  auto out = open_out(path, true);
  out.write(kFeatureMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(x.rows));
  put_u32(out, static_cast<std::uint32_t>(x.cols));
  for (double v : x.data) put_f64(out, v);
}

Matrix read_features(const fs::path& path) {
  auto in = open_in(path, true);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kFeatureMagic, 8) != 0) {
    throw FormatError(path.string() + ": bad feature-file magic");
  }
  std::uint32_t t = 0, f = 0;
  if (!get_u32(in, t) || !get_u32(in, f)) throw FormatError(path.string() + ": truncated header");
  if (t == 0 || f == 0) throw ValidationError(path.string() + ": feature file declares T=" + std::to_string(t) +
                                              ", F=" + std::to_string(f));
  Matrix x(t, f);
  for (auto& v : x.data) {
    if (!get_f64(in, v)) throw FormatError(path.string() + ": truncated payload");
  }
  return x;
}

std::vector<FeatureSequence> read_feature_dir(const fs::path& dir) {
  std::vector<FeatureSequence> out;
  for (const auto& p : sorted_files(dir, ".feat")) out.push_back({p.stem().string(), read_features(p)});
  return out;
}

decode::ActionId ActionMap::id(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ValidationError("unknown action '" + name + "'");
  return static_cast<decode::ActionId>(it - names.begin());
}

const std::string& ActionMap::name(decode::ActionId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names.size()) throw IndexError("action id out of range");
  return names[static_cast<std::size_t>(id)];
}

ActionMap read_action_map(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<long, std::string>> entries;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(n, "expected name<TAB>id");
    try {
      entries.emplace_back(std::stol(line.substr(tab + 1)), line.substr(0, tab));
    } catch (const std::exception&) {
      throw ParseError(n, "action id is not an integer");
    }
  }
  std::sort(entries.begin(), entries.end());
  ActionMap m;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != static_cast<long>(i)) throw FormatError("action ids must be 0..A-1 without gaps");
    m.names.push_back(entries[i].second);
  }
  return m;
}

void write_action_map(const fs::path& path, const ActionMap& actions) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < actions.names.size(); ++i) out << actions.names[i] << '\t' << i << '\n';
}

std::vector<TranscriptLine> read_transcripts(const fs::path& path) {
  auto in = open_in(path);
  std::vector<TranscriptLine> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(n, "expected video_id<TAB>actions");
    TranscriptLine t{line.substr(0, tab), {}};
    std::istringstream words(line.substr(tab + 1));
    for (std::string w; words >> w;) t.second.push_back(w);
    if (t.second.empty()) throw ParseError(n, "empty transcript");
    out.push_back(std::move(t));
  }
  return out;
}

void write_transcripts(const fs::path& path, const std::vector<TranscriptLine>& lines) {
  auto out = open_out(path);
  for (const auto& [id, words] : lines) {
    out << id << '\t';
    for (std::size_t i = 0; i < words.size(); ++i) out << (i ? " " : "") << words[i];
    out << '\n';
  }
}

SegmentationRecord to_record(const std::string& video_id, const decode::Segmentation& seg, const ActionMap& actions) {
  SegmentationRecord rec{video_id, {}};
  for (const auto& s : seg.segments) rec.segments.emplace_back(actions.name(s.action), s.length);
  return rec;
}

decode::Segmentation from_record(const SegmentationRecord& rec, const ActionMap& actions) {
  decode::Segmentation seg;
  for (const auto& [name, len] : rec.segments) seg.segments.push_back({actions.id(name), len});
  return seg;
}

void write_segmentation_file(std::ostream& out, const SegmentationFile& file) {
  for (const auto& rec : file.records) {
    out << rec.video_id << '\t';
    for (std::size_t i = 0; i < rec.segments.size(); ++i) {
      out << (i ? "," : "") << rec.segments[i].first << ':' << rec.segments[i].second;
    }
    out << '\n';
  }
  for (const auto& [id, score] : file.scores) out << "# score\t" << id << '\t' << fmt_double(score) << '\n';
}

SegmentationFile parse_segmentation_file(std::istream& in) {
  SegmentationFile file;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line);
      std::string hash, key, id, value;
      std::getline(is, hash, '\t');
      if (hash == "# score" && std::getline(is, id, '\t') && std::getline(is, value)) {
        try {
          file.scores.emplace_back(id, std::stod(value));
        } catch (const std::exception&) {
          throw ParseError(n, "bad score value");
        }
      }
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(n, "expected video_id<TAB>segments");
    SegmentationRecord rec{line.substr(0, tab), {}};
    std::istringstream items(line.substr(tab + 1));
    for (std::string item; std::getline(items, item, ',');) {
      auto colon = item.rfind(':');
      if (colon == std::string::npos || colon == 0) throw ParseError(n, "segment '" + item + "' is not name:length");
      std::size_t len = 0;
      try {
        std::size_t used = 0;
        long v = std::stol(item.substr(colon + 1), &used);
        if (used != item.size() - colon - 1 || v < 1) throw std::invalid_argument("length");
        len = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw ParseError(n, "segment '" + item + "' has an invalid length");
      }
      rec.segments.emplace_back(item.substr(0, colon), len);
    }
    if (rec.segments.empty()) throw ParseError(n, "no segments");
    file.records.push_back(std::move(rec));
  }
  return file;
}

void save_segmentation_file(const fs::path& path, const SegmentationFile& file) {
  auto out = open_out(path);
  write_segmentation_file(out, file);
}

SegmentationFile load_segmentation_file(const fs::path& path) {
  auto in = open_in(path);
  return parse_segmentation_file(in);
}

void write_corpus(const fs::path& dir, const Corpus& corpus) {
  fs::create_directories(dir / "features");
  fs::create_directories(dir / "detections");
  write_action_map(dir / "actions.txt", corpus.actions);
  std::vector<TranscriptLine> transcripts;
  bool any_gt = false;
  for (const auto& v : corpus.videos) {
    write_features(dir / "features" / (v.id + ".feat"), v.features);
    hoi::save_detections(dir / "detections" / (v.id + ".jsonl"), {v.id, corpus.embedding_dim, v.detections});
    TranscriptLine line{v.id, {}};
    for (auto a : v.transcript.actions) line.second.push_back(corpus.actions.name(a));
    transcripts.push_back(std::move(line));
    any_gt = any_gt || v.ground_truth.has_value();
  }
  write_transcripts(dir / "transcripts.txt", transcripts);
  if (any_gt) {
    fs::create_directories(dir / "gt");
    for (const auto& v : corpus.videos) {
      if (!v.ground_truth) continue;
      save_segmentation_file(dir / "gt" / (v.id + ".seg"), {{to_record(v.id, *v.ground_truth, corpus.actions)}, {}});
    }
  }
}

Corpus load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("corpus directory " + dir.string() + " does not exist");
  Corpus c;
  c.actions = read_action_map(dir / "actions.txt");
  auto transcripts = read_transcripts(dir / "transcripts.txt");
  for (auto& seq : read_feature_dir(dir / "features")) {
    Video v;
    v.id = seq.video_id;
    v.features = std::move(seq.x);
    if (!c.videos.empty() && v.features.cols != c.videos.front().features.cols) {
      throw FormatError("video " + v.id + " has a different feature dimension");
    }
    auto it = std::find_if(transcripts.begin(), transcripts.end(), [&](const auto& t) { return t.first == v.id; });
    if (it == transcripts.end()) throw FormatError("no transcript for video " + v.id);
    for (const auto& name : it->second) v.transcript.actions.push_back(c.actions.id(name));

    const fs::path det = dir / "detections" / (v.id + ".jsonl");
    if (fs::exists(det)) {
      auto file = hoi::load_detections(det);
      if (c.embedding_dim == 0) c.embedding_dim = file.embedding_dim;
      if (!file.detections.empty() && file.embedding_dim != c.embedding_dim) {
        throw FormatError(det.string() + ": embedding_dim differs from the rest of the corpus");
      }
      v.detections = std::move(file.detections);
    }
    const fs::path gt = dir / "gt" / (v.id + ".seg");
    if (fs::exists(gt)) {
      auto file = load_segmentation_file(gt);
      if (file.records.size() != 1) throw FormatError(gt.string() + ": expected exactly one record");
      v.ground_truth = from_record(file.records.front(), c.actions);
      if (v.ground_truth->frames() != v.features.rows) {
        throw ValidationError(gt.string() + ": ground truth length differs from the feature count");
      }
    }
    c.videos.push_back(std::move(v));
  }
  return c;
}

}  // namespace adaact::data
