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
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adaact/data/synth.hpp"
#include "adaact/train/config.hpp"

namespace adaact::cli {

// Training and generation settings merged from a `key = value` file and
// command-line overrides. `seed` drives both the generator and training.
struct RunConfig {
  train::TrainConfig train;
  data::SynthConfig synth = data::SynthConfig::defaults();
  std::vector<std::string> background{"SIL"};
  std::size_t jobs = 1;
  // Keys assigned so far, in assignment order (later entries win).
  std::vector<std::pair<std::string, std::string>> assigned;

  // Throws ConfigError naming the key when it is unknown or the value is bad.
  void set(const std::string& key, const std::string& value);
  // Every key with its effective value, sorted by key.
  std::map<std::string, std::string> resolved() const;
  static std::vector<std::string> keys();
};

// Applies `key = value` lines; '#' starts a comment, blank lines are skipped.
void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source = "<config>");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
// Applies one `key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace adaact::cli
