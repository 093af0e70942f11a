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

#include "adaact/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "adaact/errors.hpp"

namespace adaact::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': '" + v + "' is not a count");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
}

std::string real_string(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// `name: a b c; name: a b` -> activities with generator-drawn HOI means.
std::vector<data::ActivitySpec> parse_activities(const std::string& v) {
  std::vector<data::ActivitySpec> out;
  std::istringstream in(v);
  for (std::string item; std::getline(in, item, ';');) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("key 'activities': '" + item + "' is not name: actions");
    data::ActivitySpec spec;
    spec.name = trim(item.substr(0, colon));
    spec.transcript = words(item.substr(colon + 1));
    if (spec.name.empty() || spec.transcript.empty()) {
      throw ConfigError("key 'activities': '" + item + "' needs a name and at least one action");
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::string activities_string(const std::vector<data::ActivitySpec>& acts) {
  std::vector<std::string> parts;
  for (const auto& a : acts) parts.push_back(a.name + ": " + join(a.transcript, " "));
  return join(parts, "; ");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  auto& s = synth;
  if (key == "seed") {
    train.set(key, v);
    s.seed = train.seed;
  } else if (key == "actions") {
    s.actions = words(v);
  } else if (key == "mean_length") {
    s.mean_length.clear();
    for (const auto& w : words(v)) s.mean_length.push_back(parse_real(key, w));
  } else if (key == "activities") {
    s.activities = parse_activities(v);
  } else if (key == "ambiguous_pairs") {
    s.ambiguous_pairs.clear();
    for (const auto& w : words(v)) {
      const auto slash = w.find('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == w.size()) {
        throw ConfigError("key 'ambiguous_pairs': '" + w + "' is not first/second");
      }
      s.ambiguous_pairs.emplace_back(w.substr(0, slash), w.substr(slash + 1));
    }
  } else if (key == "feature_dim") s.feature_dim = parse_count(key, v);
  else if (key == "embedding_dim") s.embedding_dim = parse_count(key, v);
  else if (key == "t_min") s.t_min = parse_count(key, v);
  else if (key == "t_max") s.t_max = parse_count(key, v);
  else if (key == "videos_per_activity") s.videos_per_activity = parse_count(key, v);
  else if (key == "sigma_feat") s.sigma_feat = parse_real(key, v);
  else if (key == "sigma_hoi") s.sigma_hoi = parse_real(key, v);
  else if (key == "feature_mean_scale") s.feature_mean_scale = parse_real(key, v);
  else if (key == "hoi_mean_scale") s.hoi_mean_scale = parse_real(key, v);
  else if (key == "hoi_min_events") s.hoi_min_events = parse_count(key, v);
  else if (key == "hoi_max_events") s.hoi_max_events = parse_count(key, v);
  else if (key == "background") background = words(v);
  else if (key == "jobs") {
    jobs = parse_count(key, v);
    if (jobs == 0) throw ConfigError("key 'jobs' must be positive");
  } else {
    train.set(key, v);
  }
  assigned.emplace_back(key, v);
}

std::map<std::string, std::string> RunConfig::resolved() const {
  auto out = train.to_map();
  std::vector<std::string> lengths, pairs;
  for (double m : synth.mean_length) lengths.push_back(real_string(m));
  for (const auto& [a, b] : synth.ambiguous_pairs) pairs.push_back(a + "/" + b);
  out["actions"] = join(synth.actions, " ");
  out["mean_length"] = join(lengths, " ");
  out["activities"] = activities_string(synth.activities);
  out["ambiguous_pairs"] = join(pairs, " ");
  out["feature_dim"] = std::to_string(synth.feature_dim);
  out["embedding_dim"] = std::to_string(synth.embedding_dim);
  out["t_min"] = std::to_string(synth.t_min);
  out["t_max"] = std::to_string(synth.t_max);
  out["videos_per_activity"] = std::to_string(synth.videos_per_activity);
  out["sigma_feat"] = real_string(synth.sigma_feat);
  out["sigma_hoi"] = real_string(synth.sigma_hoi);
  out["feature_mean_scale"] = real_string(synth.feature_mean_scale);
  out["hoi_mean_scale"] = real_string(synth.hoi_mean_scale);
  out["hoi_min_events"] = std::to_string(synth.hoi_min_events);
  out["hoi_max_events"] = std::to_string(synth.hoi_max_events);
  out["background"] = join(background, " ");
  out["jobs"] = std::to_string(jobs);
  return out;
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : RunConfig{}.resolved()) out.push_back(k);
  return out;
}

void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source) {
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(n) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(n) + ": empty key");
    cfg.set(key, line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  apply_config_text(cfg, in, path.string());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  cfg.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

}  // namespace adaact::cli
