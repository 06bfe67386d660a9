// src/trainer.cc
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

#include "nspp/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "nspp/checkpoint.h"
#include "nspp/config.h"

namespace nspp {

namespace fs = std::filesystem;

void TrainConfig::validate(const StftConfig& stft) const {
  if (!(lr_init > 0.0)) throw std::invalid_argument("TrainConfig: lr_init must be positive");
  if (!(lr_decay_per_epoch > 0.0 && lr_decay_per_epoch <= 1.0)) {
    throw std::invalid_argument("TrainConfig: lr_decay_per_epoch must be in (0, 1]");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw std::invalid_argument("TrainConfig: Adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw std::invalid_argument("TrainConfig: adam_eps must be positive");
  if (weight_decay < 0.0) throw std::invalid_argument("TrainConfig: weight_decay must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (segment_samples < 1 || segment_samples % stft.hop_length != 0) {
    throw std::invalid_argument("TrainConfig: segment_samples must be a positive hop multiple");
  }
  if (max_epochs < 0) throw std::invalid_argument("TrainConfig: max_epochs must be >= 0");
  if (checkpoint_every < 0) throw std::invalid_argument("TrainConfig: checkpoint_every must be >= 0");
  if (threads < 0) throw std::invalid_argument("TrainConfig: threads must be >= 0");
}

Dataset::Dataset(const std::string& dir, const StftConfig& stft_cfg, int segment_samples)
    : stft_cfg_(stft_cfg), segment_samples_(segment_samples) {
  stft_cfg_.validate();
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("dataset: '" + dir + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("dataset: no .wav files in '" + dir + "'");

  for (const auto& f : files) {
    Waveform w = read_wav(f.string());
    if (w.sample_rate != stft_cfg_.sample_rate) {
      throw std::runtime_error(f.string() + ": sample rate " + std::to_string(w.sample_rate) +
                               " Hz, expected " + std::to_string(stft_cfg_.sample_rate) +
                               " Hz (resampling is out of scope)");
    }
    bool padded = false;
    if (static_cast<long>(w.samples.size()) < segment_samples_) {
      w.samples.resize(static_cast<std::size_t>(segment_samples_), 0.0f);
      padded = true;
    }
    waves_.push_back(std::move(w));
    names_.push_back(f.filename().string());
    padded_.push_back(padded);
  }
}

long Dataset::num_crop_offsets(int i) const {
  const long len = static_cast<long>(waves_[static_cast<std::size_t>(i)].samples.size());
  return (len - segment_samples_) / stft_cfg_.hop_length + 1;
}

long Dataset::segment_frames() const { return stft_cfg_.num_frames(segment_samples_); }

DatasetItem Dataset::crop_features(int i, long offset) const {
  const Waveform& full = waves_[static_cast<std::size_t>(i)];
  if (offset < 0 || offset % stft_cfg_.hop_length != 0 ||
      offset + segment_samples_ > static_cast<long>(full.samples.size())) {
    throw std::invalid_argument("dataset: crop offset " + std::to_string(offset) +
                                " out of range or not hop aligned");
  }
  Waveform crop;
  crop.sample_rate = full.sample_rate;
  crop.samples.assign(full.samples.begin() + offset,
                      full.samples.begin() + offset + segment_samples_);
  const ComplexSpectrogram spec = stft(crop, stft_cfg_);
  DatasetItem item;
  item.log_amp = log_amplitude(amplitude(spec));
  item.phase = phase_of(spec).v;
  return item;
}

DatasetItem Dataset::full_features(int i) const {
  const ComplexSpectrogram spec = stft(waves_[static_cast<std::size_t>(i)], stft_cfg_);
  DatasetItem item;
  item.log_amp = log_amplitude(amplitude(spec));
  item.phase = phase_of(spec).v;
  return item;
}

namespace {

std::vector<Mat<float>*> tensor_ptrs(ModelParams<float>& p) {
  std::vector<Mat<float>*> out;
  p.for_each_tensor([&out](const std::string&, Mat<float>& m) { out.push_back(&m); });
  return out;
}

void adamw_step(ModelParams<float>& params, ModelParams<float>& grads, ModelParams<float>& m,
                ModelParams<float>& v, long t, double lr, const TrainConfig& cfg) {
  const auto ps = tensor_ptrs(params);
  const auto gs = tensor_ptrs(grads);
  const auto ms = tensor_ptrs(m);
  const auto vs = tensor_ptrs(v);
  const float b1 = static_cast<float>(cfg.adam_beta1);
  const float b2 = static_cast<float>(cfg.adam_beta2);
  const float bc1 = 1.0f - std::pow(b1, static_cast<float>(t));
  const float bc2 = 1.0f - std::pow(b2, static_cast<float>(t));
  const float eps = static_cast<float>(cfg.adam_eps);
  const float step_size = static_cast<float>(lr);
  const float wd = static_cast<float>(cfg.weight_decay);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps[i]->array();
    auto g = gs[i]->array();
    auto mm = ms[i]->array();
    auto vv = vs[i]->array();
    mm = b1 * mm + (1.0f - b1) * g;
    vv = b2 * vv + (1.0f - b2) * g.square();
    ps[i]->array() =
        p - step_size * ((mm / bc1) / ((vv / bc2).sqrt() + eps) + wd * p);
  }
}

struct BatchFeatures {
  Mat<float> log_amp;
  Mat<float> phase;
  Packing pk;
};

BatchFeatures pack_batch(const Dataset& data, const std::vector<std::pair<int, long>>& plan,
                         std::size_t begin, std::size_t end) {
  const long seg_frames = data.segment_frames();
  const int items = static_cast<int>(end - begin);
  BatchFeatures batch;
  batch.pk = Packing::uniform(items, seg_frames);
  long bins = 0;
  for (int i = 0; i < items; ++i) {
    const auto& [utt, offset] = plan[begin + static_cast<std::size_t>(i)];
    DatasetItem item = data.crop_features(utt, offset);
    if (i == 0) {
      bins = item.log_amp.rows();
      batch.log_amp.resize(bins, seg_frames * items);
      batch.phase.resize(bins, seg_frames * items);
    }
    batch.log_amp.middleCols(i * seg_frames, seg_frames) = item.log_amp;
    batch.phase.middleCols(i * seg_frames, seg_frames) = item.phase;
  }
  return batch;
}

nlohmann::json plan_to_json(const std::vector<std::pair<int, long>>& plan) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [utt, off] : plan) arr.push_back({utt, off});
  return arr;
}

std::vector<std::pair<int, long>> plan_from_json(const nlohmann::json& arr) {
  std::vector<std::pair<int, long>> plan;
  for (const auto& e : arr) plan.emplace_back(e.at(0).get<int>(), e.at(1).get<long>());
  return plan;
}

double validation_loss(const Dataset& val, const ModelParams<float>& params,
                       const LossConfig& loss_cfg) {
  double total = 0.0;
  for (int i = 0; i < val.size(); ++i) {
    const DatasetItem item = val.full_features(i);
    const ModelOutput<float> out = nspp_forward(params, item.log_amp);
    total += loss_total(out.phase, item.phase, loss_cfg).total;
  }
  return total / val.size();
}

}  // namespace

void save_train_checkpoint(const std::string& path, const TrainingState& state,
                           const TrainConfig& train_cfg, const LossConfig& loss_cfg,
                           const StftConfig& stft_cfg) {
  CheckpointFile file;
  file.header["kind"] = "train";
  file.header["model"] = model_config_to_json(state.params.cfg);
  file.header["train"] = train_config_to_json(train_cfg);
  file.header["loss"] = loss_config_to_json(loss_cfg);
  file.header["stft"] = stft_config_to_json(stft_cfg);
  file.header["step"] = state.step;
  file.header["epoch"] = state.epoch;
  file.header["lr"] = state.lr;
  file.header["rng"] = state.rng.serialize();
  file.header["epoch_plan"] = plan_to_json(state.epoch_plan);
  file.header["plan_cursor"] = state.plan_cursor;
  state.params.for_each_tensor([&file](const std::string& name, const Mat<float>& m) {
    file.tensors.emplace_back(name, m);
  });
  state.adam_m.for_each_tensor([&file](const std::string& name, const Mat<float>& m) {
    file.tensors.emplace_back("adam_m." + name, m);
  });
  state.adam_v.for_each_tensor([&file](const std::string& name, const Mat<float>& m) {
    file.tensors.emplace_back("adam_v." + name, m);
  });
  write_checkpoint_file(path, file);
}

LoadedTrainCheckpoint load_train_checkpoint(const std::string& path) {
  const CheckpointFile file = read_checkpoint_file(path);
  const std::string kind = file.header.value("kind", "");
  if (kind != "train") {
    throw std::runtime_error(path + ": not a training checkpoint (kind '" + kind +
                             "'); model-only files carry no optimizer state");
  }
  LoadedTrainCheckpoint out;
  out.train_cfg = train_config_from_json(file.header.at("train"));
  out.loss_cfg = loss_config_from_json(file.header.at("loss"));
  out.stft_cfg = stft_config_from_json(file.header.at("stft"));

  TrainingState& st = out.state;
  st.params.cfg = model_config_from_json(file.header.at("model"));
  st.params.cfg.validate();
  detail::size_params(st.params);
  st.adam_m = zeros_like(st.params);
  st.adam_v = zeros_like(st.params);
  fill_params_from_tensors(file, "", st.params);
  fill_params_from_tensors(file, "adam_m.", st.adam_m);
  fill_params_from_tensors(file, "adam_v.", st.adam_v);
  st.step = file.header.at("step").get<long>();
  st.epoch = file.header.at("epoch").get<int>();
  st.lr = file.header.at("lr").get<double>();
  st.rng = Rng::deserialize(file.header.at("rng").get<std::string>());
  st.epoch_plan = plan_from_json(file.header.at("epoch_plan"));
  st.plan_cursor = file.header.at("plan_cursor").get<std::size_t>();
  return out;
}

TrainResult train(const TrainConfig& train_cfg, const ModelConfig& model_cfg,
                  const LossConfig& loss_cfg, const StftConfig& stft_cfg,
                  const std::string& out_dir, const std::string& resume_path,
                  const std::function<void(const StepRecord&)>& on_step) {
  stft_cfg.validate();
  model_cfg.validate();
  loss_cfg.validate();
  train_cfg.validate(stft_cfg);
  if (model_cfg.input_bins != stft_cfg.bins()) {
    throw std::invalid_argument("train: model input_bins " + std::to_string(model_cfg.input_bins) +
                                " does not match STFT bins " + std::to_string(stft_cfg.bins()));
  }

  const int threads = train_cfg.threads > 0
                          ? train_cfg.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
  Eigen::setNbThreads(std::max(threads, 1));

  fs::create_directories(out_dir);
  std::ofstream log(fs::path(out_dir) / "train_log.jsonl", std::ios::app);
  if (!log) throw std::runtime_error(out_dir + ": cannot open training log");
  auto log_record = [&log](const nlohmann::json& j) { log << j.dump() << "\n" << std::flush; };

  Dataset data(train_cfg.data_dir, stft_cfg, train_cfg.segment_samples);
  std::unique_ptr<Dataset> val;
  if (!train_cfg.val_dir.empty()) {
    val = std::make_unique<Dataset>(train_cfg.val_dir, stft_cfg, train_cfg.segment_samples);
  }
  for (int i = 0; i < data.size(); ++i) {
    if (data.was_padded(i)) {
      log_record({{"type", "data"}, {"file", data.name(i)}, {"padded_to", train_cfg.segment_samples}});
    }
  }

  TrainingState state;
  if (resume_path.empty()) {
    state.params = init_params<float>(model_cfg, train_cfg.seed);
    state.adam_m = zeros_like(state.params);
    state.adam_v = zeros_like(state.params);
    state.lr = train_cfg.lr_init;
    state.rng = Rng(train_cfg.seed + 0x9e3779b97f4a7c15ULL);
  } else {
    LoadedTrainCheckpoint loaded = load_train_checkpoint(resume_path);
    if (model_config_to_json(loaded.state.params.cfg) != model_config_to_json(model_cfg)) {
      throw std::runtime_error(resume_path +
                               ": checkpoint model config is incompatible with the requested one");
    }
    state = std::move(loaded.state);
  }

  TrainResult result;
  ModelParams<float> grads = zeros_like(state.params);

  while (state.epoch < train_cfg.max_epochs) {
    const auto epoch_start = std::chrono::steady_clock::now();
    if (state.epoch_plan.empty()) {
      std::vector<int> order(static_cast<std::size_t>(data.size()));
      for (int i = 0; i < data.size(); ++i) order[static_cast<std::size_t>(i)] = i;
      state.rng.shuffle(order.begin(), order.end());
      state.epoch_plan.clear();
      for (int utt : order) {
        const long offset =
            stft_cfg.hop_length *
            static_cast<long>(state.rng.uniform_index(static_cast<std::uint64_t>(data.num_crop_offsets(utt))));
        state.epoch_plan.emplace_back(utt, offset);
      }
      state.plan_cursor = 0;
    }

    double epoch_loss_sum = 0.0;
    long epoch_steps = 0;
    while (state.plan_cursor < state.epoch_plan.size()) {
      const std::size_t begin = state.plan_cursor;
      const std::size_t end =
          std::min(begin + static_cast<std::size_t>(train_cfg.batch_size), state.epoch_plan.size());
      BatchFeatures batch = pack_batch(data, state.epoch_plan, begin, end);

      ForwardTrace<float> trace;
      nspp_forward(state.params, batch.log_amp, batch.pk, &trace);
      Mat<float> d_phase;
      const LossBreakdown loss =
          loss_total_batched(trace.phase, batch.phase, batch.pk, loss_cfg, &d_phase);
      if (!std::isfinite(loss.total)) {
        CheckpointFile dump;
        dump.header["kind"] = "diagnostic";
        dump.header["step"] = state.step;
        dump.header["items"] = nlohmann::json::array();
        for (std::size_t i = begin; i < end; ++i) {
          dump.header["items"].push_back({state.epoch_plan[i].first, state.epoch_plan[i].second});
        }
        dump.tensors.emplace_back("log_amp", batch.log_amp);
        dump.tensors.emplace_back("phase", batch.phase);
        dump.tensors.emplace_back("predicted_phase", trace.phase);
        const std::string dump_path =
            (fs::path(out_dir) / ("diag_nonfinite_step" + std::to_string(state.step) + ".nspp")).string();
        write_checkpoint_file(dump_path, dump);
        throw std::runtime_error("train: non-finite loss at step " + std::to_string(state.step) +
                                 "; offending batch dumped to " + dump_path);
      }

      grads.for_each_tensor([](const std::string&, Mat<float>& m) { m.setZero(); });
      nspp_backward(state.params, trace, d_phase, grads);
      state.step += 1;
      adamw_step(state.params, grads, state.adam_m, state.adam_v, state.step, state.lr, train_cfg);
      state.plan_cursor = end;

      StepRecord rec{state.step, state.epoch, state.lr, loss};
      result.history.push_back(rec);
      epoch_loss_sum += loss.total;
      epoch_steps += 1;
      log_record({{"type", "step"},
                  {"step", rec.step},
                  {"epoch", rec.epoch},
                  {"lr", rec.lr},
                  {"ip", loss.ip},
                  {"gd", loss.gd},
                  {"iaf", loss.iaf},
                  {"total", loss.total}});
      if (on_step) on_step(rec);

      if (train_cfg.checkpoint_every > 0 && state.step % train_cfg.checkpoint_every == 0) {
        const std::string path =
            (fs::path(out_dir) / ("ckpt_step" + std::to_string(state.step) + ".nspp")).string();
        save_train_checkpoint(path, state, train_cfg, loss_cfg, stft_cfg);
      }
    }

    state.epoch += 1;
    state.lr *= train_cfg.lr_decay_per_epoch;
    state.epoch_plan.clear();
    state.plan_cursor = 0;

    nlohmann::json summary{{"type", "epoch"},
                           {"epoch", state.epoch},
                           {"steps", epoch_steps},
                           {"mean_total", epoch_steps > 0 ? epoch_loss_sum / epoch_steps : 0.0},
                           {"lr_next", state.lr},
                           {"elapsed_s", std::chrono::duration<double>(
                                             std::chrono::steady_clock::now() - epoch_start)
                                             .count()}};
    if (val) summary["val_total"] = validation_loss(*val, state.params, loss_cfg);
    log_record(summary);
  }

  result.final_train_checkpoint_path = (fs::path(out_dir) / "ckpt_final.nspp").string();
  result.final_model_path = (fs::path(out_dir) / "model_final.nspp").string();
  save_train_checkpoint(result.final_train_checkpoint_path, state, train_cfg, loss_cfg, stft_cfg);
  save_model_checkpoint(result.final_model_path, state.params);
  result.state = std::move(state);
  return result;
}

}  // namespace nspp
