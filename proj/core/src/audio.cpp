// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avsync/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "avsync/errors.hpp"

namespace avsync {
namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

std::uint16_t read_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open WAV file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) -> InputError {
    return InputError("bad WAV file " + path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("missing RIFF/WAVE header");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) throw fail("chunk extends past end of file");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16) throw fail("fmt chunk too short");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == 0xFFFE && len >= 40) format = read_u16(chunk + 8 + 24);  // extensible sub-format
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) throw fail("no fmt chunk");
  if (!data) throw fail("no data chunk");
  if (channels != 1) throw fail("expected mono audio, found " + std::to_string(channels) + " channels");
  if (rate == 0) throw fail("zero sample rate");

  AudioClip clip;
  clip.sample_rate = rate;
  if (format == 1 && bits == 16) {
    const std::size_t n = data_len / 2;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(read_u16(data + 2 * i));
      clip.samples[i] = static_cast<Real>(v) / Real(32768);
    }
  } else if (format == 3 && bits == 32) {
    const std::size_t n = data_len / 4;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      clip.samples[i] = static_cast<Real>(std::bit_cast<float>(read_u32(data + 4 * i)));
    }
  } else {
    throw fail("unsupported encoding (format " + std::to_string(format) + ", " + std::to_string(bits) +
               " bits)");
  }
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const auto rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(clip.samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, pcm ? 1 : 3);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_len);
  for (Real s : clip.samples) {
    if (pcm) {
      // Same 1/32768 scale as the reader, so k/32768 samples round-trip exactly.
      const long q = std::clamp(std::lround(static_cast<double>(s) * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write WAV file " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

AudioClip decimate(const AudioClip& clip, std::size_t factor) {
  if (factor == 0) throw ConfigError("decimation factor must be >= 1");
  if (factor == 1) return clip;
  AudioClip out;
  out.sample_rate = clip.sample_rate / static_cast<double>(factor);
  const std::size_t n = clip.samples.size() / factor;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real acc = 0;
    for (std::size_t j = 0; j < factor; ++j) acc += clip.samples[i * factor + j];
    out.samples[i] = acc / static_cast<Real>(factor);
  }
  return out;
}

AudioClip conform_rate(const AudioClip& clip, double target_rate) {
  if (clip.sample_rate == target_rate) return clip;
  const double ratio = clip.sample_rate / target_rate;
  const double rounded = std::round(ratio);
  if (rounded < 2.0 || std::abs(ratio - rounded) > 1e-9) {
    throw InputError("sample rate " + std::to_string(clip.sample_rate) + " Hz is not an integer multiple of " +
                     std::to_string(target_rate) + " Hz");
  }
  return decimate(clip, static_cast<std::size_t>(rounded));
}

}  // namespace avsync
