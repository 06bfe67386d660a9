// nspp/config.h
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

#ifndef NSPP_CONFIG_H_
#define NSPP_CONFIG_H_

#include <nlohmann/json.hpp>
#include <string>

#include "nspp/losses.h"
#include "nspp/model.h"
#include "nspp/stft.h"
#include "nspp/trainer.h"

// JSON config file with four sections ("stft", "model", "loss", "train"),
// each mirroring the corresponding config struct field for field.  Unknown
// keys are rejected so typos fail loudly.

namespace nspp {

struct ToolConfig {
  StftConfig stft;
  ModelConfig model;
  LossConfig loss;
  TrainConfig train;
};

nlohmann::json stft_config_to_json(const StftConfig& c);
nlohmann::json model_config_to_json(const ModelConfig& c);
nlohmann::json loss_config_to_json(const LossConfig& c);
nlohmann::json train_config_to_json(const TrainConfig& c);

StftConfig stft_config_from_json(const nlohmann::json& j);
ModelConfig model_config_from_json(const nlohmann::json& j);
LossConfig loss_config_from_json(const nlohmann::json& j);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json tool_config_to_json(const ToolConfig& c);
ToolConfig tool_config_from_json(const nlohmann::json& j);

// Missing sections fall back to defaults; malformed content throws with the
// offending key in the message.
ToolConfig load_config(const std::string& path);
void save_config(const std::string& path, const ToolConfig& cfg);

}  // namespace nspp

#endif  // NSPP_CONFIG_H_
