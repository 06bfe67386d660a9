// nspp/checkpoint.h
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

#ifndef NSPP_CHECKPOINT_H_
#define NSPP_CHECKPOINT_H_

#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "nspp/model.h"

// "NSPP1" checkpoint container:
//
//   bytes 0..4   magic "NSPP1"
//   u32          header length in bytes
//   header       UTF-8 JSON; always has a "kind" field ("model" or "train")
//                and a "model" object with the model configuration
//   u32          tensor count
//   per tensor   u32 name length, name bytes,
//                u32 ndim, u32 dims[ndim], prod(dims) f32 little endian
//
// Model-only files carry the parameter tensors; training files additionally
// carry optimizer moments ("adam_m.*", "adam_v.*") and schedule state in the
// header.

namespace nspp {

inline constexpr char kCheckpointMagic[] = "NSPP1";

struct CheckpointFile {
  nlohmann::json header;
  // Tensors in file order; matrices are stored column-major in memory and
  // written as [rows, cols] with column-major payload.
  std::vector<std::pair<std::string, Eigen::MatrixXf>> tensors;
};

void write_checkpoint_file(const std::string& path, const CheckpointFile& file);
CheckpointFile read_checkpoint_file(const std::string& path);

// Writes a model-only checkpoint (kind "model").
void save_model_checkpoint(const std::string& path, const ModelParams<float>& params);

// Loads model parameters from either a model-only or a training checkpoint.
ModelParams<float> load_model_checkpoint(const std::string& path);

// Fills `params` (already sized from its config) from the named tensors in
// `file`; throws if a parameter tensor is missing or has the wrong shape.
// `prefix` selects e.g. "adam_m." tensor groups.
void fill_params_from_tensors(const CheckpointFile& file, const std::string& prefix,
                              ModelParams<float>& params);

}  // namespace nspp

#endif  // NSPP_CHECKPOINT_H_
