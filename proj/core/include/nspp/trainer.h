// nspp/trainer.h
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

#ifndef NSPP_TRAINER_H_
#define NSPP_TRAINER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nspp/losses.h"
#include "nspp/model.h"
#include "nspp/rng.h"
#include "nspp/stft.h"
#include "nspp/wav.h"

namespace nspp {

struct TrainConfig {
  std::string data_dir;
  std::string val_dir;  // optional; per-epoch validation loss is logged when set

  double lr_init = 2e-4;
  double lr_decay_per_epoch = 0.999;  // multiplied in after every epoch
  double adam_beta1 = 0.8;
  double adam_beta2 = 0.99;
  double weight_decay = 0.01;  // decoupled
  double adam_eps = 1e-8;

  int batch_size = 16;
  int segment_samples = 8000;  // hop-aligned random crops of this length
  int max_epochs = 100;
  std::uint64_t seed = 1234;
  int checkpoint_every = 0;  // steps; 0 = final checkpoint only
  int threads = 0;           // GEMM threads; 0 = hardware concurrency

  void validate(const StftConfig& stft) const;
};

// One training item: features of a segment crop.
struct DatasetItem {
  Eigen::MatrixXf log_amp;  // bins x frames
  Eigen::MatrixXf phase;    // natural wrapped phase, bins x frames
};

// In-memory corpus of 16 kHz mono WAV files.  Files shorter than the
// training segment are zero-padded up to it at load time.
class Dataset {
 public:
  Dataset(const std::string& dir, const StftConfig& stft_cfg, int segment_samples);

  int size() const { return static_cast<int>(waves_.size()); }
  const Waveform& utterance(int i) const { return waves_[static_cast<std::size_t>(i)]; }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  bool was_padded(int i) const { return padded_[static_cast<std::size_t>(i)]; }

  // Number of distinct hop-aligned crop offsets for utterance i.
  long num_crop_offsets(int i) const;

  // Features of segment [offset, offset + segment_samples).
  DatasetItem crop_features(int i, long offset) const;

  // Features of the whole utterance (used for validation/evaluation).
  DatasetItem full_features(int i) const;

  int segment_samples() const { return segment_samples_; }
  long segment_frames() const;

 private:
  StftConfig stft_cfg_;
  int segment_samples_;
  std::vector<Waveform> waves_;
  std::vector<std::string> names_;
  std::vector<bool> padded_;
};

// Restorable optimization state.  Saving and loading round-trips exactly, so
// a resumed run reproduces the uninterrupted one bit for bit on the same
// platform.
struct TrainingState {
  ModelParams<float> params;
  ModelParams<float> adam_m;
  ModelParams<float> adam_v;
  long step = 0;
  int epoch = 0;
  double lr = 2e-4;
  Rng rng{0};
  // Remaining plan of the current epoch: (utterance, crop offset) pairs.
  std::vector<std::pair<int, long>> epoch_plan;
  std::size_t plan_cursor = 0;
};

struct StepRecord {
  long step = 0;
  int epoch = 0;
  double lr = 0.0;
  LossBreakdown loss;
};

struct TrainResult {
  TrainingState state;
  std::string final_model_path;
  std::string final_train_checkpoint_path;
  std::vector<StepRecord> history;  // one record per step, mirrored in the log
};

// Runs the optimization schedule: AdamW with decoupled weight decay, learning
// rate multiplied by lr_decay_per_epoch after each epoch, one random
// hop-aligned crop per utterance per epoch.  Writes an append-only JSONL log
// (one record per step plus one summary per epoch) and periodic/final
// checkpoints under out_dir.  `resume_path` continues from a training
// checkpoint.  `on_step`, when set, observes every step record.
TrainResult train(const TrainConfig& train_cfg, const ModelConfig& model_cfg,
                  const LossConfig& loss_cfg, const StftConfig& stft_cfg,
                  const std::string& out_dir, const std::string& resume_path = "",
                  const std::function<void(const StepRecord&)>& on_step = nullptr);

// Training-state checkpoints (kind "train").
void save_train_checkpoint(const std::string& path, const TrainingState& state,
                           const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                           const StftConfig& stft_cfg);

struct LoadedTrainCheckpoint {
  TrainingState state;
  TrainConfig train_cfg;
  LossConfig loss_cfg;
  StftConfig stft_cfg;
};

LoadedTrainCheckpoint load_train_checkpoint(const std::string& path);

}  // namespace nspp

#endif  // NSPP_TRAINER_H_
