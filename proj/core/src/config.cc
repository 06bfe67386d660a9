// src/config.cc
//
// Copyright 2026  nspp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nspp/config.h"

#include <fstream>
#include <set>
#include <stdexcept>

namespace nspp {

namespace {

using nlohmann::json;

// Pulls a field if present, enforcing that every present key is known.
class StrictObject {
 public:
  StrictObject(const json& j, const std::string& where) : j_(j), where_(where) {
    if (!j.is_object()) throw std::runtime_error(where + ": expected a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::runtime_error(where_ + "." + key + ": " + e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.contains(key)) {
        throw std::runtime_error(where_ + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> known_;
};

std::string window_to_string(WindowKind w) {
  switch (w) {
    case WindowKind::kHann: return "hann";
    case WindowKind::kRect: return "rect";
  }
  return "hann";
}

WindowKind window_from_string(const std::string& s) {
  if (s == "hann") return WindowKind::kHann;
  if (s == "rect") return WindowKind::kRect;
  throw std::runtime_error("unknown window kind '" + s + "' (expected hann or rect)");
}

}  // namespace

json stft_config_to_json(const StftConfig& c) {
  return json{{"sample_rate", c.sample_rate},
              {"window_length", c.window_length},
              {"hop_length", c.hop_length},
              {"fft_size", c.fft_size},
              {"window", window_to_string(c.window)},
              {"centered", c.centered}};
}

StftConfig stft_config_from_json(const json& j) {
  StftConfig c;
  StrictObject o(j, "stft");
  o.get("sample_rate", c.sample_rate);
  o.get("window_length", c.window_length);
  o.get("hop_length", c.hop_length);
  o.get("fft_size", c.fft_size);
  std::string window = window_to_string(c.window);
  o.get("window", window);
  c.window = window_from_string(window);
  o.get("centered", c.centered);
  o.finish();
  return c;
}

json model_config_to_json(const ModelConfig& c) {
  return json{{"input_bins", c.input_bins},
              {"trunk_channels", c.trunk_channels},
              {"pre_kernel", c.pre_kernel},
              {"block_kernels", c.block_kernels},
              {"sub_block_dilations", c.sub_block_dilations},
              {"output_kernel", c.output_kernel},
              {"lrelu_slope", c.lrelu_slope},
              {"use_parallel_estimation", c.use_parallel_estimation}};
}

ModelConfig model_config_from_json(const json& j) {
  ModelConfig c;
  StrictObject o(j, "model");
  o.get("input_bins", c.input_bins);
  o.get("trunk_channels", c.trunk_channels);
  o.get("pre_kernel", c.pre_kernel);
  o.get("block_kernels", c.block_kernels);
  o.get("sub_block_dilations", c.sub_block_dilations);
  o.get("output_kernel", c.output_kernel);
  o.get("lrelu_slope", c.lrelu_slope);
  o.get("use_parallel_estimation", c.use_parallel_estimation);
  o.finish();
  return c;
}

json loss_config_to_json(const LossConfig& c) {
  return json{{"enable_ip", c.enable_ip},
              {"enable_gd", c.enable_gd},
              {"enable_iaf", c.enable_iaf},
              {"anti_wrap_enabled", c.anti_wrap_enabled}};
}

LossConfig loss_config_from_json(const json& j) {
  LossConfig c;
  StrictObject o(j, "loss");
  o.get("enable_ip", c.enable_ip);
  o.get("enable_gd", c.enable_gd);
  o.get("enable_iaf", c.enable_iaf);
  o.get("anti_wrap_enabled", c.anti_wrap_enabled);
  o.finish();
  return c;
}

json train_config_to_json(const TrainConfig& c) {
  return json{{"data_dir", c.data_dir},
              {"val_dir", c.val_dir},
              {"lr_init", c.lr_init},
              {"lr_decay_per_epoch", c.lr_decay_per_epoch},
              {"adam_beta1", c.adam_beta1},
              {"adam_beta2", c.adam_beta2},
              {"weight_decay", c.weight_decay},
              {"adam_eps", c.adam_eps},
              {"batch_size", c.batch_size},
              {"segment_samples", c.segment_samples},
              {"max_epochs", c.max_epochs},
              {"seed", c.seed},
              {"checkpoint_every", c.checkpoint_every},
              {"threads", c.threads}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  StrictObject o(j, "train");
  o.get("data_dir", c.data_dir);
  o.get("val_dir", c.val_dir);
  o.get("lr_init", c.lr_init);
  o.get("lr_decay_per_epoch", c.lr_decay_per_epoch);
  o.get("adam_beta1", c.adam_beta1);
  o.get("adam_beta2", c.adam_beta2);
  o.get("weight_decay", c.weight_decay);
  o.get("adam_eps", c.adam_eps);
  o.get("batch_size", c.batch_size);
  o.get("segment_samples", c.segment_samples);
  o.get("max_epochs", c.max_epochs);
  o.get("seed", c.seed);
  o.get("checkpoint_every", c.checkpoint_every);
  o.get("threads", c.threads);
  o.finish();
  return c;
}

json tool_config_to_json(const ToolConfig& c) {
  return json{{"stft", stft_config_to_json(c.stft)},
              {"model", model_config_to_json(c.model)},
              {"loss", loss_config_to_json(c.loss)},
              {"train", train_config_to_json(c.train)}};
}

ToolConfig tool_config_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("config: expected a JSON object");
  static const std::set<std::string> sections{"stft", "model", "loss", "train"};
  for (const auto& [key, value] : j.items()) {
    if (!sections.contains(key)) {
      throw std::runtime_error("config: unknown section '" + key + "'");
    }
  }
  ToolConfig c;
  if (j.contains("stft")) c.stft = stft_config_from_json(j.at("stft"));
  if (j.contains("model")) c.model = model_config_from_json(j.at("model"));
  if (j.contains("loss")) c.loss = loss_config_from_json(j.at("loss"));
  if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
  return c;
}

ToolConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return tool_config_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_config(const std::string& path, const ToolConfig& cfg) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << tool_config_to_json(cfg).dump(2) << "\n";
}

}  // namespace nspp
