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

#include <filesystem>
#include <optional>
#include <string>

#include "adaact/cli/run_config.hpp"
#include "adaact/eval/metrics.hpp"

namespace adaact::cli {

namespace fs = std::filesystem;

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

void cmd_datagen(const RunConfig& cfg, const fs::path& out_dir);

struct TrainPaths {
  fs::path corpus_dir;
  fs::path checkpoint;                 // written after the last epoch
  std::optional<fs::path> resume;      // continue from this checkpoint
  std::optional<fs::path> log;         // CSV epoch,loss,skipped; default <checkpoint>.log.csv
};
void cmd_train(const RunConfig& cfg, const TrainPaths& paths);

// Decoding uses the checkpoint's configuration with the explicitly assigned
// keys of `cfg` applied on top.
void cmd_segment(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& corpus_dir, const fs::path& out_file);
void cmd_align(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& corpus_dir, const fs::path& out_file);

// Scores a segmentation file against the `<id>.seg` files of `gt_dir`.
eval::Metrics evaluate_files(const fs::path& pred_file, const fs::path& gt_dir,
                             const std::vector<std::string>& background);
std::string cmd_eval(const RunConfig& cfg, const fs::path& pred_file, const fs::path& gt_dir);

// Entry point of the `adaact` executable.
int run(int argc, char** argv);

}  // namespace adaact::cli
