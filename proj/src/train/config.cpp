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

#include "adaact/train/config.hpp"

#include <charconv>
#include <sstream>

#include "adaact/errors.hpp"

namespace adaact::train {
namespace {

std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': '" + v + "' is not a count");
  return out;
}

long parse_long(const std::string& key, const std::string& v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
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

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::string real_string(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void TrainConfig::set(const std::string& key, const std::string& v) {
  if (key == "lr") lr = parse_real(key, v);
  else if (key == "epochs") epochs = parse_count(key, v);
  else if (key == "top_k") top_k = parse_count(key, v);
  else if (key == "knowledge_dim") knowledge_dim = parse_count(key, v);
  else if (key == "heads") heads = parse_count(key, v);
  else if (key == "out_channels") out_channels = parse_count(key, v);
  else if (key == "window") window = parse_count(key, v);
  else if (key == "seed") seed = parse_count(key, v);
  else if (key == "loss_mode") {
    if (v == "discriminative") loss_mode = LossMode::kDiscriminative;
    else if (v == "pseudo_label") loss_mode = LossMode::kPseudoLabel;
    else throw ConfigError("key 'loss_mode': expected discriminative or pseudo_label, got '" + v + "'");
  } else if (key == "competitors") {
    if (v == "grammar") competitors = Competitors::kGrammar;
    else if (v == "edits") competitors = Competitors::kEdits;
    else throw ConfigError("key 'competitors': expected grammar or edits, got '" + v + "'");
  } else if (key == "reestimate_every") reestimate_every = parse_count(key, v);
  else if (key == "detection_threshold") detection_threshold = parse_real(key, v);
  else if (key == "iou_thresh") iou_thresh = parse_real(key, v);
  else if (key == "time_gap") time_gap = parse_long(key, v);
  else if (key == "model_dim") model_dim = parse_count(key, v);
  else if (key == "integrator_layers") integrator_layers = parse_count(key, v);
  else if (key == "attention_heads") attention_heads = parse_count(key, v);
  else if (key == "mlp_dim") mlp_dim = parse_count(key, v);
  else if (key == "hyper_hidden") hyper_hidden = parse_count(key, v);
  else if (key == "use_hoi") use_hoi = parse_bool(key, v);
  else if (key == "use_independent") use_independent = parse_bool(key, v);
  else if (key == "max_segment_length") max_segment_length = parse_count(key, v);
  else if (key == "prior_floor") prior_floor = parse_real(key, v);
  else if (key == "prior_alpha") prior_alpha = parse_real(key, v);
  else throw ConfigError("unknown configuration key '" + key + "'");
}

std::map<std::string, std::string> TrainConfig::to_map() const {
  return {
      {"lr", real_string(lr)},
      {"epochs", std::to_string(epochs)},
      {"top_k", std::to_string(top_k)},
      {"knowledge_dim", std::to_string(knowledge_dim)},
      {"heads", std::to_string(heads)},
      {"out_channels", std::to_string(out_channels)},
      {"window", std::to_string(window)},
      {"seed", std::to_string(seed)},
      {"loss_mode", loss_mode == LossMode::kDiscriminative ? "discriminative" : "pseudo_label"},
      {"competitors", competitors == Competitors::kEdits ? "edits" : "grammar"},
      {"reestimate_every", std::to_string(reestimate_every)},
      {"detection_threshold", real_string(detection_threshold)},
      {"iou_thresh", real_string(iou_thresh)},
      {"time_gap", std::to_string(time_gap)},
      {"model_dim", std::to_string(model_dim)},
      {"integrator_layers", std::to_string(integrator_layers)},
      {"attention_heads", std::to_string(attention_heads)},
      {"mlp_dim", std::to_string(mlp_dim)},
      {"hyper_hidden", std::to_string(hyper_hidden)},
      {"use_hoi", use_hoi ? "true" : "false"},
      {"use_independent", use_independent ? "true" : "false"},
      {"max_segment_length", std::to_string(max_segment_length)},
      {"prior_floor", real_string(prior_floor)},
      {"prior_alpha", real_string(prior_alpha)},
  };
}

std::vector<std::string> TrainConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : TrainConfig{}.to_map()) out.push_back(k);
  return out;
}

void TrainConfig::validate() const {
  if (!(lr >= 0.0)) throw ConfigError("lr must be non-negative");
  if (top_k == 0) throw ConfigError("top_k must be positive");
  if (knowledge_dim == 0 || out_channels == 0 || model_dim < 2) throw ConfigError("dimensions must be positive");
  if (heads == 0 || out_channels % heads != 0) {
    throw ConfigError("out_channels=" + std::to_string(out_channels) + " must be divisible by heads=" +
                      std::to_string(heads));
  }
  if (attention_heads == 0 || model_dim % attention_heads != 0) {
    throw ConfigError("model_dim must be divisible by attention_heads");
  }
  if (window == 0 || window % 2 == 0) throw ConfigError("window must be odd and positive");
  if (!(iou_thresh > 0.0 && iou_thresh < 1.0)) throw ConfigError("iou_thresh must lie in (0,1)");
  if (!(prior_floor > 0.0 && prior_floor < 1.0)) throw ConfigError("prior_floor must lie in (0,1)");
  if (prior_alpha < 0.0) throw ConfigError("prior_alpha must be non-negative");
}

}  // namespace adaact::train
