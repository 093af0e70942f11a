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

#include "adaact/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "adaact/data/corpus.hpp"
#include "adaact/data/synth.hpp"
#include "adaact/errors.hpp"
#include "adaact/train/trainer.hpp"

namespace adaact::cli {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_color_st("adaact");
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("ADAACT_LOG");
    const std::string level = env ? env : "info";
    if (level == "error") l->set_level(spdlog::level::err);
    else if (level == "info") l->set_level(spdlog::level::info);
    else if (level == "debug") l->set_level(spdlog::level::debug);
    else throw ConfigError("ADAACT_LOG must be error, info or debug, got '" + level + "'");
    return l;
  }();
  return log;
}

void log_config(const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) logger()->info("config {} = {}", k, v);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception
// (lowest index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += jobs) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(work, j);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

train::TrainConfig decode_config(const RunConfig& cfg, const train::TrainConfig& stored) {
  train::TrainConfig out = stored;
  const auto train_keys = train::TrainConfig::keys();
  for (const auto& [k, v] : cfg.assigned) {
    if (std::find(train_keys.begin(), train_keys.end(), k) != train_keys.end()) out.set(k, v);
  }
  out.validate();
  return out;
}

void check_dims(const train::ModelState& state, const data::Corpus& corpus) {
  const auto& d = state.model.dims;
  if (d.feature_dim != corpus.feature_dim() || d.num_actions != corpus.actions.size() ||
      d.embedding_dim != corpus.embedding_dim) {
    throw ValidationError("checkpoint dimensions do not match the corpus");
  }
}

void write_output(const data::SegmentationFile& file, const fs::path& out_file) {
  if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
  data::save_segmentation_file(out_file, file);
}

}  // namespace

void cmd_datagen(const RunConfig& cfg, const fs::path& out_dir) {
  log_config(cfg.resolved());
  auto synth = data::generate_corpus(cfg.synth);
  data::write_corpus(out_dir, synth.corpus);
  logger()->info("wrote {} videos to {}", synth.corpus.videos.size(), out_dir.string());
}

void cmd_train(const RunConfig& cfg, const TrainPaths& paths) {
  cfg.train.validate();
  log_config(cfg.resolved());
  const data::Corpus corpus = data::load_corpus(paths.corpus_dir);
  train::ModelState state;
  if (paths.resume) {
    state = train::load_checkpoint(*paths.resume).state;
    check_dims(state, corpus);
    logger()->info("resuming from epoch {}", state.epoch);
  } else {
    state = train::initial_state(corpus, cfg.train);
  }

  fs::path log_path = paths.log.value_or(fs::path(paths.checkpoint.string() + ".log.csv"));
  if (log_path.has_parent_path()) fs::create_directories(log_path.parent_path());
  const bool append = paths.resume && fs::exists(log_path);
  std::ofstream log(log_path, append ? std::ios::app : std::ios::trunc);
  if (!log) throw FormatError("cannot write training log " + log_path.string());
  if (!append) log << "epoch,loss,skipped\n";

  while (state.epoch < cfg.train.epochs) {
    const auto r = train::train_epoch(state, corpus, cfg.train);
    char line[96];
    std::snprintf(line, sizeof line, "%zu,%.17g,%zu\n", r.epoch, r.mean_loss, r.skipped);
    log << line << std::flush;
    logger()->debug("epoch {} loss {:.6f} skipped {}", r.epoch, r.mean_loss, r.skipped);
  }
  if (paths.checkpoint.has_parent_path()) fs::create_directories(paths.checkpoint.parent_path());
  train::save_checkpoint(paths.checkpoint, state, cfg.train);
  logger()->info("saved checkpoint {} after {} epochs", paths.checkpoint.string(), state.epoch);
}

void cmd_segment(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& corpus_dir, const fs::path& out_file) {
  auto ck = train::load_checkpoint(checkpoint);
  const auto tc = decode_config(cfg, ck.config);
  log_config(tc.to_map());
  const data::Corpus corpus = data::load_corpus(corpus_dir);
  check_dims(ck.state, corpus);
  std::vector<decode::SegmentResult> results(corpus.videos.size());
  parallel_for(corpus.videos.size(), cfg.jobs,
               [&](std::size_t i) { results[i] = train::segment_video(ck.state, corpus.videos[i], tc); });
  data::SegmentationFile file;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& id = corpus.videos[i].id;
    file.records.push_back(data::to_record(id, results[i].segmentation, corpus.actions));
    file.scores.emplace_back(id, results[i].score);
  }
  write_output(file, out_file);
  logger()->info("segmented {} videos into {}", results.size(), out_file.string());
}

void cmd_align(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& corpus_dir, const fs::path& out_file) {
  auto ck = train::load_checkpoint(checkpoint);
  const auto tc = decode_config(cfg, ck.config);
  log_config(tc.to_map());
  const data::Corpus corpus = data::load_corpus(corpus_dir);
  check_dims(ck.state, corpus);
  std::vector<decode::Alignment> results(corpus.videos.size());
  parallel_for(corpus.videos.size(), cfg.jobs, [&](std::size_t i) {
    const auto& v = corpus.videos[i];
    results[i] = train::align_video(ck.state, v, v.transcript, tc);
  });
  data::SegmentationFile file;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& id = corpus.videos[i].id;
    file.records.push_back(data::to_record(id, results[i].segmentation, corpus.actions));
    file.scores.emplace_back(id, results[i].score);
  }
  write_output(file, out_file);
  logger()->info("aligned {} videos into {}", results.size(), out_file.string());
}

eval::Metrics evaluate_files(const fs::path& pred_file, const fs::path& gt_dir,
                             const std::vector<std::string>& background) {
  const auto pred = data::load_segmentation_file(pred_file);
  std::vector<data::SegmentationRecord> gts;
  std::set<std::string> names;
  for (const auto& rec : pred.records) {
    const fs::path gt_path = gt_dir / (rec.video_id + ".seg");
    auto gt = data::load_segmentation_file(gt_path);
    if (gt.records.size() != 1) throw FormatError(gt_path.string() + ": expected exactly one record");
    for (const auto& [n, l] : rec.segments) names.insert(n);
    for (const auto& [n, l] : gt.records.front().segments) names.insert(n);
    gts.push_back(std::move(gt.records.front()));
  }
  data::ActionMap actions{{names.begin(), names.end()}};
  std::vector<eval::LabeledVideo> corpus;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    corpus.push_back({pred.records[i].video_id, data::from_record(gts[i], actions).frame_labels(),
                      data::from_record(pred.records[i], actions).frame_labels()});
  }
  std::set<decode::ActionId> bg;
  for (const auto& n : background) {
    if (names.count(n)) bg.insert(actions.id(n));
  }
  return eval::metrics(corpus, bg);
}

std::string cmd_eval(const RunConfig& cfg, const fs::path& pred_file, const fs::path& gt_dir) {
  return eval::metrics_json(evaluate_files(pred_file, gt_dir, cfg.background));
}

int run(int argc, char** argv) {
  CLI::App app{"Weakly supervised action segmentation with interaction-conditioned classifiers"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out, corpus_dir, checkpoint, resume, log_file, pred, gt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--set", overrides, "override, key=value")->take_all();
    sub->add_option("--jobs", jobs, "worker threads for per-video decoding");
  };
  auto* datagen = app.add_subcommand("datagen", "generate a synthetic corpus");
  common(datagen);
  datagen->add_option("--out", out, "output corpus directory")->required();

  auto* trainc = app.add_subcommand("train", "train a model on a corpus");
  common(trainc);
  trainc->add_option("--corpus", corpus_dir, "corpus directory")->required();
  trainc->add_option("--out", out, "output checkpoint path")->required();
  trainc->add_option("--resume", resume, "checkpoint to continue from");
  trainc->add_option("--log", log_file, "training log CSV (default <out>.log.csv)");

  auto* segmentc = app.add_subcommand("segment", "segment videos with the checkpoint grammar");
  auto* alignc = app.add_subcommand("align", "align videos to their transcripts");
  for (auto* sub : {segmentc, alignc}) {
    common(sub);
    sub->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
    sub->add_option("--corpus", corpus_dir, "corpus directory")->required();
    sub->add_option("--out", out, "output segmentation file")->required();
  }

  auto* evalc = app.add_subcommand("eval", "score predictions against ground truth");
  common(evalc);
  evalc->add_option("--pred", pred, "predicted segmentation file")->required();
  evalc->add_option("--gt", gt, "directory of ground-truth .seg files")->required();
  evalc->add_option("--out", out, "metrics JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    logger();
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (seed) cfg.set("seed", std::to_string(*seed));
    for (const auto& o : overrides) apply_override(cfg, o);
    if (jobs) cfg.set("jobs", std::to_string(*jobs));

    if (datagen->parsed()) {
      cmd_datagen(cfg, out);
    } else if (trainc->parsed()) {
      TrainPaths paths{corpus_dir, out, std::nullopt, std::nullopt};
      if (!resume.empty()) paths.resume = resume;
      if (!log_file.empty()) paths.log = log_file;
      cmd_train(cfg, paths);
    } else if (segmentc->parsed()) {
      cmd_segment(cfg, checkpoint, corpus_dir, out);
    } else if (alignc->parsed()) {
      cmd_align(cfg, checkpoint, corpus_dir, out);
    } else if (evalc->parsed()) {
      const std::string report = cmd_eval(cfg, pred, gt);
      if (out.empty()) {
        std::cout << report << '\n';
      } else {
        std::ofstream f(out, std::ios::trunc);
        if (!f) throw FormatError("cannot write " + out);
        f << report << '\n';
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace adaact::cli
