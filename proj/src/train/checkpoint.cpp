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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "adaact/errors.hpp"
#include "adaact/train/trainer.hpp"

namespace adaact::train {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'A', 'A', 'C', 'T', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFFu);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFFu);
  out.write(reinterpret_cast<const char*>(b), 8);
}

bool get_bytes(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!get_bytes(in, b, 4)) throw FormatError(path + ": truncated checkpoint");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!get_bytes(in, b, 8)) throw FormatError(path + ": truncated checkpoint");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v = 0.0;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  std::filesystem::path out = path;
  out += ".json";
  return out;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelState& state, const TrainConfig& cfg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof kMagic);
  for (const auto& [name, t] : state.model.named_parameters()) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t e : t.shape()) put_u32(out, static_cast<std::uint32_t>(e));
    for (double v : t.values()) put_f64(out, v);
  }
  if (!out) throw FormatError("failed writing checkpoint " + path.string());

  nlohmann::ordered_json meta;
  meta["format"] = "adaact-checkpoint";
  meta["version"] = 1;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.to_map()) config[k] = v;
  meta["config"] = config;
  meta["dims"] = {{"feature_dim", state.model.dims.feature_dim},
                  {"embedding_dim", state.model.dims.embedding_dim},
                  {"num_actions", state.model.dims.num_actions}};
  meta["epoch"] = state.epoch;
  meta["prior"] = state.prior;
  meta["lambda"] = state.lengths.lambda;
  nlohmann::ordered_json grammar = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < state.grammar.size(); ++i) {
    grammar.push_back({{"actions", state.grammar.transcripts[i].actions}, {"log_prior", state.grammar.log_prior[i]}});
  }
  meta["grammar"] = grammar;
  std::ofstream js(sidecar(path), std::ios::trunc);
  if (!js) throw FormatError("cannot write checkpoint metadata " + sidecar(path).string());
  js << meta.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream js(sidecar(path));
  if (!js) throw FormatError("missing checkpoint metadata " + sidecar(path).string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(js);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar(path).string() + ": " + e.what());
  }

  Checkpoint ck;
  try {
    for (const auto& [k, v] : meta.at("config").items()) ck.config.set(k, v.get<std::string>());
    ModelDims dims{meta.at("dims").at("feature_dim").get<std::size_t>(),
                   meta.at("dims").at("embedding_dim").get<std::size_t>(),
                   meta.at("dims").at("num_actions").get<std::size_t>()};
    ck.state.model = AdaActModel::init(ck.config, dims);
    ck.state.epoch = meta.at("epoch").get<std::size_t>();
    ck.state.prior = meta.at("prior").get<std::vector<double>>();
    ck.state.lengths.lambda = meta.at("lambda").get<std::vector<double>>();
    for (const auto& g : meta.at("grammar")) {
      ck.state.grammar.add({g.at("actions").get<std::vector<decode::ActionId>>()}, g.at("log_prior").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar(path).string() + ": " + e.what());
  }

  std::map<std::string, num::Tensor> params;
  for (auto& [n, t] : ck.state.model.named_parameters()) params.emplace(n, t);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read checkpoint " + name);
  char magic[8];
  in.read(magic, sizeof magic);
  if (in.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0) throw FormatError(name + ": bad checkpoint magic");
  std::size_t loaded = 0;
  while (in.peek() != std::char_traits<char>::eof()) {
    const std::uint32_t len = get_u32(in, name);
    std::string pname(len, '\0');
    if (!get_bytes(in, reinterpret_cast<unsigned char*>(pname.data()), len)) throw FormatError(name + ": truncated name");
    const std::uint32_t rank = get_u32(in, name);
    num::Shape shape(rank);
    for (auto& e : shape) e = get_u32(in, name);
    auto it = params.find(pname);
    if (it == params.end()) throw FormatError(name + ": unknown parameter '" + pname + "'");
    if (it->second.shape() != shape) {
      throw FormatError(name + ": shape mismatch for '" + pname + "': file " + num::shape_string(shape) + ", model " +
                        num::shape_string(it->second.shape()));
    }
    auto values = it->second.mutable_values();
    for (auto& v : values) v = get_f64(in, name);
    ++loaded;
  }
  if (loaded != params.size()) throw FormatError(name + ": checkpoint is missing parameters");
  return ck;
}

}  // namespace adaact::train
