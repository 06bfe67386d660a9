// src/wav.cc
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

#include "nspp/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "WAV and PHSC I/O assume a little-endian host");

namespace nspp {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

std::uint16_t read_u16(std::istream& in) {
  std::uint16_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 2);
  return v;
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0) fail(path, "not a RIFF file");
  read_u32(in);  // RIFF payload size, unused
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0) fail(path, "not a WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<std::int16_t> pcm;

  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_u32(in);
    if (!in) fail(path, "truncated chunk header");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail(path, "malformed fmt chunk");
      format = read_u16(in);
      channels = read_u16(in);
      rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) fail(path, "data chunk before fmt chunk");
      if (format != 1) fail(path, "unsupported encoding; expected 16-bit PCM (format tag 1)");
      if (channels != 1) fail(path, "unsupported channel count " + std::to_string(channels) + "; expected mono");
      if (bits != 16) fail(path, "unsupported bit depth " + std::to_string(bits) + "; expected 16");
      pcm.resize(chunk_size / 2);
      in.read(reinterpret_cast<char*>(pcm.data()), static_cast<std::streamsize>(pcm.size() * 2));
      if (!in) fail(path, "truncated data chunk");
      break;
    } else {
      // Skip unknown chunk, word aligned.
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!have_fmt) fail(path, "missing fmt chunk");
  if (pcm.empty()) fail(path, "empty or missing data chunk");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(pcm.size());
  for (std::size_t i = 0; i < pcm.size(); ++i) {
    w.samples[i] = static_cast<float>(pcm[i]) / 32768.0f;
  }
  return w;
}

void write_wav(const std::string& path, const Waveform& wave) {
  if (wave.samples.empty()) fail(path, "refusing to write empty waveform");
  if (wave.sample_rate <= 0) fail(path, "invalid sample rate");

  std::vector<std::int16_t> pcm(wave.samples.size());
  for (std::size_t i = 0; i < wave.samples.size(); ++i) {
    const float x = std::clamp(wave.samples[i], -1.0f, 1.0f);
    pcm[i] = static_cast<std::int16_t>(std::lrintf(x * 32767.0f));
  }

  const std::uint32_t data_size = static_cast<std::uint32_t>(pcm.size() * 2);
  const std::uint32_t rate = static_cast<std::uint32_t>(wave.sample_rate);
  const std::uint32_t byte_rate = rate * 2;
  const std::uint16_t block_align = 2, channels = 1, bits = 16, pcm_tag = 1;
  const std::uint32_t riff_size = 36 + data_size;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open file for writing");
  auto put = [&out](const void* p, std::size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  put("RIFF", 4);
  put(&riff_size, 4);
  put("WAVE", 4);
  put("fmt ", 4);
  const std::uint32_t fmt_size = 16;
  put(&fmt_size, 4);
  put(&pcm_tag, 2);
  put(&channels, 2);
  put(&rate, 4);
  put(&byte_rate, 4);
  put(&block_align, 2);
  put(&bits, 2);
  put("data", 4);
  put(&data_size, 4);
  put(pcm.data(), data_size);
  if (!out) fail(path, "write failed");
}

}  // namespace nspp
