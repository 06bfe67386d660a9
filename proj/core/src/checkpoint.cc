// src/checkpoint.cc
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

#include "nspp/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "nspp/config.h"

namespace nspp {

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

}  // namespace

void write_checkpoint_file(const std::string& path, const CheckpointFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kCheckpointMagic, 5);
  const std::string header = file.header.dump();
  write_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  write_u32(out, static_cast<std::uint32_t>(file.tensors.size()));
  for (const auto& [name, m] : file.tensors) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, 2);
    write_u32(out, static_cast<std::uint32_t>(m.rows()));
    write_u32(out, static_cast<std::uint32_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(float) * m.size()));
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

CheckpointFile read_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kCheckpointMagic, 5) != 0) {
    throw std::runtime_error(path + ": not an NSPP1 checkpoint (bad magic)");
  }
  const std::uint32_t header_len = read_u32(in);
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) throw std::runtime_error(path + ": truncated header");

  CheckpointFile file;
  try {
    file.header = nlohmann::json::parse(header);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": malformed checkpoint header: " + e.what());
  }

  const std::uint32_t count = read_u32(in);
  file.tensors.reserve(count);
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint32_t name_len = read_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const std::uint32_t ndim = read_u32(in);
    if (!in || ndim != 2) throw std::runtime_error(path + ": unsupported tensor rank");
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    Eigen::MatrixXf m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
    if (!in) throw std::runtime_error(path + ": truncated tensor payload");
    file.tensors.emplace_back(std::move(name), std::move(m));
  }
  return file;
}

void fill_params_from_tensors(const CheckpointFile& file, const std::string& prefix,
                              ModelParams<float>& params) {
  std::map<std::string, const Eigen::MatrixXf*> by_name;
  for (const auto& [name, m] : file.tensors) by_name[name] = &m;
  params.for_each_tensor([&](const std::string& name, Mat<float>& m) {
    const auto it = by_name.find(prefix + name);
    if (it == by_name.end()) {
      throw std::runtime_error("checkpoint is missing tensor '" + prefix + name + "'");
    }
    const Eigen::MatrixXf& src = *it->second;
    if (src.rows() != m.rows() || src.cols() != m.cols()) {
      throw std::runtime_error("checkpoint tensor '" + prefix + name + "' has shape " +
                               std::to_string(src.rows()) + "x" + std::to_string(src.cols()) +
                               ", model expects " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()));
    }
    m = src;
  });
}

void save_model_checkpoint(const std::string& path, const ModelParams<float>& params) {
  CheckpointFile file;
  file.header["kind"] = "model";
  file.header["model"] = model_config_to_json(params.cfg);
  params.for_each_tensor([&file](const std::string& name, const Mat<float>& m) {
    file.tensors.emplace_back(name, m);
  });
  write_checkpoint_file(path, file);
}

ModelParams<float> load_model_checkpoint(const std::string& path) {
  const CheckpointFile file = read_checkpoint_file(path);
  const std::string kind = file.header.value("kind", "");
  if (kind != "model" && kind != "train") {
    throw std::runtime_error(path + ": unknown checkpoint kind '" + kind + "'");
  }
  if (!file.header.contains("model")) {
    throw std::runtime_error(path + ": checkpoint header has no model config");
  }
  ModelParams<float> params;
  params.cfg = model_config_from_json(file.header.at("model"));
  params.cfg.validate();
  detail::size_params(params);
  fill_params_from_tensors(file, "", params);
  return params;
}

}  // namespace nspp
