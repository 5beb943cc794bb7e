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

#include "avsync/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "avsync/errors.hpp"
#include "avsync/seed.hpp"

namespace avsync {
namespace {

struct Subject {
  double pitch_hz;
  double harmonics[4];
  double background;
  double shade_x;
  double shade_y;
  double mouth_half_width;
  double lip_level;
};

Subject make_subject(std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Subject s{};
  s.pitch_hz = 170.0 + 70.0 * u(rng);
  for (double& h : s.harmonics) h = 0.65 + 0.35 * u(rng);
  s.background = 135.0 + 25.0 * spread * u(rng);
  s.shade_x = 20.0 * spread * u(rng);
  s.shade_y = 15.0 * spread * u(rng);
  s.mouth_half_width = 25.0 + 5.0 * spread * u(rng);
  s.lip_level = 45.0 + 15.0 * spread * u(rng);
  return s;
}

std::vector<double> smoothed_noise(std::size_t frames, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto radius = static_cast<std::size_t>(std::ceil(3 * sigma));
  std::vector<double> noise(frames + 2 * radius);
  for (double& v : noise) v = n01(rng);
  std::vector<double> kernel(2 * radius + 1);
  double norm = 0;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(radius);
    kernel[i] = std::exp(-x * x / (2 * sigma * sigma));
    norm += kernel[i] * kernel[i];
  }
  std::vector<double> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    double acc = 0;
    for (std::size_t i = 0; i < kernel.size(); ++i) acc += kernel[i] * noise[t + i];
    out[t] = acc / std::sqrt(norm);
  }
  return out;
}

std::vector<double> smooth_envelope(std::size_t frames, const SynthConfig& c, std::mt19937_64& rng) {
  const auto fast = smoothed_noise(frames, c.envelope_sigma_frames, rng);
  const auto slow = smoothed_noise(frames, c.slow_sigma_frames, rng);
  const double a = std::sqrt(1 - c.slow_share), b = std::sqrt(c.slow_share);
  std::vector<double> env(frames);
  // Unit-variance mixture squashed into (0, 1).
  for (std::size_t t = 0; t < frames; ++t) env[t] = 1.0 / (1.0 + std::exp(-2.5 * (a * fast[t] + b * slow[t])));
  return env;
}

AudioClip render_audio(const Subject& s, const std::vector<double>& env, const SynthConfig& c, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, c.audio_noise);
  std::normal_distribution<double> excitation(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  double phases[4];
  for (double& p : phases) p = phase(rng);
  const auto n = static_cast<std::size_t>(std::llround(c.duration_s * c.sample_rate));
  AudioClip clip;
  clip.sample_rate = c.sample_rate;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / c.sample_rate;
    // Envelope value at frame centres, linearly interpolated in between.
    const double f = std::clamp(t * c.fps - 0.5, 0.0, static_cast<double>(env.size() - 1));
    const auto k = static_cast<std::size_t>(f);
    const double a = k + 1 < env.size() ? env[k] + (env[k + 1] - env[k]) * (f - k) : env[k];
    double tone = 0;
    for (int h = 0; h < 4; ++h) {
      tone += s.harmonics[h] / (h + 1) * std::sin(2 * std::numbers::pi * (h + 1) * s.pitch_hz * t + phases[h]);
    }
    // Voiced part plus broadband excitation: the envelope then shows up in
    // every mel band, not only the ones near this subject's harmonics.
    const double carrier = (1 - c.breath) * tone + c.breath * 0.5 * excitation(rng);
    const double v = 0.35 * (0.03 + a) * carrier + noise(rng);
    clip.samples[i] = static_cast<Real>(std::clamp(std::round(v * 32768.0), -32768.0, 32767.0) / 32768.0);
  }
  return clip;
}

Image render_frame(const Subject& s, double openness, const SynthConfig& c, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, c.pixel_noise);
  Image img = Image::gray(c.height, c.width);
  const double cy = 0.62 * static_cast<double>(c.height);
  const double cx = 0.5 * static_cast<double>(c.width);
  const double half_h = 1.5 + 0.22 * static_cast<double>(c.height) * openness;
  for (std::size_t y = 0; y < c.height; ++y) {
    for (std::size_t x = 0; x < c.width; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      double v = s.background + s.shade_x * dx / c.width + s.shade_y * dy / c.height;
      const double r = std::sqrt((dx / s.mouth_half_width) * (dx / s.mouth_half_width) + (dy / half_h) * (dy / half_h));
      // Soft edge: fully dark inside r < 0.85, background beyond r > 1.15.
      const double w = std::clamp((1.15 - r) / 0.3, 0.0, 1.0);
      v = v + (s.lip_level - v) * w * w * (3 - 2 * w);
      v += noise(rng);
      img.at(y, x) = static_cast<Real>(std::clamp(std::round(v), 0.0, 255.0));
    }
  }
  return img;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_subjects == 0 || clips_per_subject == 0) throw ConfigError("synthetic corpus needs subjects and clips");
  if (!(duration_s > 0) || !(fps > 0) || !(sample_rate > 0)) throw ConfigError("synthetic corpus needs positive rates");
  if (height < 4 || width < 4) throw ConfigError("synthetic frames must be at least 4x4");
  if (!(envelope_sigma_frames > 0) || !(slow_sigma_frames > 0)) {
    throw ConfigError("envelope smoothing must be positive");
  }
  if (!(slow_share >= 0) || slow_share > 1) throw ConfigError("slow_share must be in [0, 1]");
  if (!(audio_noise >= 0) || !(pixel_noise >= 0)) throw ConfigError("noise levels must be >= 0");
  if (!(breath >= 0) || breath > 1) throw ConfigError("breath must be in [0, 1]");
  if (!(appearance_spread >= 0) || appearance_spread > 1) throw ConfigError("appearance_spread must be in [0, 1]");
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  SynthCorpus corpus;
  const auto frames = static_cast<std::size_t>(std::llround(config.duration_s * config.fps));
  for (std::size_t s = 0; s < config.n_subjects; ++s) {
    std::mt19937_64 subject_rng(derive_seed(config.seed, s));
    const Subject subject = make_subject(subject_rng, config.appearance_spread);
    char sid[16];
    std::snprintf(sid, sizeof sid, "S%02zu", s);
    for (std::size_t c = 0; c < config.clips_per_subject; ++c) {
      std::mt19937_64 rng(derive_seed(config.seed, 1000 + s * 1000 + c));
      auto env = smooth_envelope(frames, config, rng);
      ClipSource clip;
      clip.subject_id = sid;
      clip.clip_id = std::string(sid) + "_c" + std::to_string(c);
      clip.fps = config.fps;
      clip.audio = render_audio(subject, env, config, rng);
      for (double e : env) clip.frames.push_back(render_frame(subject, e, config, rng));
      corpus.clips.push_back(std::move(clip));
      corpus.envelopes.push_back(std::move(env));
    }
  }
  return corpus;
}

std::vector<ManifestRecord> write_corpus(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "audio");
  std::vector<ManifestRecord> records;
  for (const auto& clip : corpus.clips) {
    ManifestRecord r;
    r.subject_id = clip.subject_id;
    r.audio_path = dir / "audio" / (clip.clip_id + ".wav");
    r.frames_dir = dir / "frames" / clip.clip_id;
    r.fps = clip.fps;
    r.sample_rate = clip.audio.sample_rate;
    write_wav(r.audio_path, clip.audio, WavEncoding::kPcm16);
    fs::create_directories(r.frames_dir);
    for (std::size_t k = 0; k < clip.frames.size(); ++k) {
      char name[16];
      std::snprintf(name, sizeof name, "%04zu.pgm", k);
      write_pgm(r.frames_dir / name, clip.frames[k]);
    }
    records.push_back(std::move(r));
  }
  write_manifest(dir / "manifest.csv", records);
  return records;
}

}  // namespace avsync
