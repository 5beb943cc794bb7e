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

#include "avsync/speech_features.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <numbers>

#include "avsync/errors.hpp"

namespace avsync {

std::size_t FeatureConfig::frame_length() const {
  return static_cast<std::size_t>(std::lround(window_ms * 1e-3 * sample_rate));
}

std::size_t FeatureConfig::hop_length() const {
  return static_cast<std::size_t>(std::lround(window_ms * 1e-3 * sample_rate * (1.0 - overlap)));
}

void FeatureConfig::validate() const {
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  if (window_ms <= 0) throw ConfigError("window length must be positive");
  if (overlap < 0 || overlap >= 1) throw ConfigError("frame overlap must be in [0, 1)");
  if (frame_length() == 0 || hop_length() == 0) throw ConfigError("frame shorter than one sample");
  if (fft_size < frame_length()) throw ConfigError("fft size is smaller than the frame length");
  if (n_filters == 0) throw ConfigError("need at least one mel filter");
  if (f_low < 0 || upper_hz() <= f_low) throw ConfigError("mel range must satisfy 0 <= f_low < f_high");
  if (upper_hz() > sample_rate / 2 + 1e-9) throw ConfigError("f_high exceeds the Nyquist frequency");
  if (mfcc && (n_mfcc == 0 || n_mfcc > n_filters)) throw ConfigError("n_mfcc must be in [1, n_filters]");
  if (delta_window == 0) throw ConfigError("delta window must be >= 1");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<std::vector<Real>> frame_signal(const AudioClip& clip, double window_ms, double overlap) {
  if (clip.samples.empty()) throw InputError("cannot frame an empty clip");
  if (clip.sample_rate <= 0) throw InputError("clip has a non-positive sample rate");
  FeatureConfig cfg;
  cfg.sample_rate = clip.sample_rate;
  cfg.window_ms = window_ms;
  cfg.overlap = overlap;
  const std::size_t len = cfg.frame_length();
  const std::size_t hop = cfg.hop_length();
  if (len == 0 || hop == 0) throw ConfigError("frame shorter than one sample");
  if (clip.samples.size() < len) {
    throw InputError("clip of " + std::to_string(clip.samples.size()) + " samples is shorter than one " +
                     std::to_string(window_ms) + " ms frame");
  }
  const std::size_t count = (clip.samples.size() - len) / hop + 1;
  std::vector<std::vector<Real>> frames(count);
  for (std::size_t f = 0; f < count; ++f) {
    const auto first = clip.samples.begin() + static_cast<std::ptrdiff_t>(f * hop);
    frames[f].assign(first, first + static_cast<std::ptrdiff_t>(len));
  }
  return frames;
}

MelFilterbank::MelFilterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate, double f_low,
                             double f_high)
    : n_filters_(n_filters), n_bins_(fft_size / 2 + 1) {
  if (n_filters == 0 || fft_size < 2) throw ConfigError("invalid filterbank size");
  if (f_high > sample_rate / 2 + 1e-9) throw ConfigError("f_high exceeds the Nyquist frequency");
  if (f_low < 0 || f_high <= f_low) throw ConfigError("mel range must satisfy 0 <= f_low < f_high");

  const double mel_lo = hz_to_mel(f_low);
  const double mel_hi = hz_to_mel(f_high);
  std::vector<double> edges(n_filters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_filters + 1));
  }
  centers_hz_.assign(edges.begin() + 1, edges.end() - 1);
  weights_.assign(n_filters * n_bins_, Real(0));
  const double bin_hz = sample_rate / static_cast<double>(fft_size);
  for (std::size_t m = 0; m < n_filters; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins_; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > lo && f <= mid) {
        w = (f - lo) / (mid - lo);
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      weights_[m * n_bins_ + k] = static_cast<Real>(w);
    }
  }
}

std::vector<Real> MelFilterbank::apply(std::span<const Real> power) const {
  if (power.size() != n_bins_) throw ShapeError("power spectrum length does not match the filterbank");
  std::vector<Real> out(n_filters_, Real(0));
  for (std::size_t m = 0; m < n_filters_; ++m) {
    const Real* w = weights_.data() + m * n_bins_;
    Real acc = 0;
    for (std::size_t k = 0; k < n_bins_; ++k) acc += w[k] * power[k];
    out[m] = acc;
  }
  return out;
}

std::vector<Real> power_spectrum(std::span<const Real> frame, std::size_t fft_size, WindowKind window) {
  if (frame.size() > fft_size) throw ConfigError("frame is longer than the fft size");
  std::vector<Real> padded(fft_size, Real(0));
  const std::size_t n = frame.size();
  for (std::size_t i = 0; i < n; ++i) {
    Real w = 1;
    if (window == WindowKind::kHamming && n > 1) {
      w = static_cast<Real>(0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                   static_cast<double>(n - 1)));
    }
    padded[i] = frame[i] * w;
  }
  Eigen::FFT<Real> fft;
  std::vector<std::complex<Real>> spectrum;
  fft.fwd(spectrum, padded);
  std::vector<Real> power(fft_size / 2 + 1);
  const Real norm = Real(1) / static_cast<Real>(fft_size);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spectrum[k]) * norm;
  return power;
}

namespace {

std::vector<Real> log_energies(std::span<const Real> frame, const FeatureConfig& config, const MelFilterbank& bank) {
  auto energies = bank.apply(power_spectrum(frame, config.fft_size, config.window));
  for (Real& e : energies) e = std::log(e + static_cast<Real>(config.energy_floor));
  return energies;
}

}  // namespace

std::vector<Real> mel_filterbank_energies(std::span<const Real> frame, const FeatureConfig& config) {
  config.validate();
  if (frame.size() > config.fft_size) throw ConfigError("frame is longer than the fft size");
  MelFilterbank bank(config.n_filters, config.fft_size, config.sample_rate, config.f_low, config.upper_hz());
  return log_energies(frame, config, bank);
}

std::vector<Real> dct_ii(std::span<const Real> x) {
  const std::size_t n = x.size();
  std::vector<Real> out(n, Real(0));
  if (n == 0) return out;
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) /
                             (2.0 * static_cast<double>(n)));
    }
    out[k] = static_cast<Real>((k == 0 ? s0 : sk) * acc);
  }
  return out;
}

std::vector<Real> dct_iii(std::span<const Real> x) {
  const std::size_t n = x.size();
  std::vector<Real> out(n, Real(0));
  if (n == 0) return out;
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = s0 * x[0];
    for (std::size_t k = 1; k < n; ++k) {
      acc += sk * x[k] *
             std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    out[i] = static_cast<Real>(acc);
  }
  return out;
}

std::vector<Real> mfcc_from_mfec(std::span<const Real> mfec, std::size_t n_coeffs) {
  if (n_coeffs == 0 || n_coeffs > mfec.size()) {
    throw ConfigError("n_coeffs must be in [1, " + std::to_string(mfec.size()) + "]");
  }
  auto c = dct_ii(mfec);
  c.resize(n_coeffs);
  return c;
}

std::pair<Tensor, Tensor> temporal_derivatives(const Tensor& features, std::size_t window) {
  if (features.rank() != 2) throw ShapeError("temporal_derivatives expects a [T x F] matrix");
  if (features.extent(0) < 2) throw InputError("temporal derivatives need at least 2 frames");
  if (window == 0) throw ConfigError("delta window must be >= 1");

  auto delta = [window](const Tensor& c) {
    const std::size_t t_len = c.extent(0);
    const std::size_t f_len = c.extent(1);
    Real denom = 0;
    for (std::size_t n = 1; n <= window; ++n) denom += static_cast<Real>(n * n);
    denom *= 2;
    Tensor d(c.shape());
    const auto last = static_cast<std::ptrdiff_t>(t_len) - 1;
    for (std::size_t t = 0; t < t_len; ++t) {
      for (std::size_t f = 0; f < f_len; ++f) {
        Real acc = 0;
        for (std::size_t n = 1; n <= window; ++n) {
          const auto ti = static_cast<std::ptrdiff_t>(t);
          const auto ni = static_cast<std::ptrdiff_t>(n);
          const auto fwd = static_cast<std::size_t>(std::min(ti + ni, last));
          const auto bwd = static_cast<std::size_t>(std::max<std::ptrdiff_t>(ti - ni, 0));
          acc += static_cast<Real>(n) * (c[fwd * f_len + f] - c[bwd * f_len + f]);
        }
        d[t * f_len + f] = acc / denom;
      }
    }
    return d;
  };
  Tensor d1 = delta(features);
  Tensor d2 = delta(d1);
  return {std::move(d1), std::move(d2)};
}

Tensor standardize(const Tensor& x, Real eps) {
  const auto data = x.data();
  const auto n = static_cast<double>(data.size());
  double mean = 0.0;
  for (Real v : data) mean += v;
  mean /= n;
  double var = 0.0;
  for (Real v : data) var += (v - mean) * (v - mean);
  var /= n;
  const double denom = std::max(std::sqrt(var), static_cast<double>(eps));
  Tensor out(x.shape());
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = static_cast<Real>((data[i] - mean) / denom);
  return out;
}

Tensor static_features(const AudioClip& clip, const FeatureConfig& config) {
  config.validate();
  if (clip.sample_rate != config.sample_rate) {
    throw InputError("clip sample rate " + std::to_string(clip.sample_rate) + " Hz differs from configured " +
                     std::to_string(config.sample_rate) + " Hz");
  }
  AudioClip span_clip = clip;
  if (config.duration_s > 0) {
    const auto needed = static_cast<std::size_t>(std::lround(config.duration_s * config.sample_rate));
    if (clip.samples.size() < needed) {
      throw InputError("clip of " + std::to_string(clip.duration_s()) + " s is shorter than the configured " +
                       std::to_string(config.duration_s) + " s");
    }
    span_clip.samples.resize(needed);
  }
  const auto frames = frame_signal(span_clip, config.window_ms, config.overlap);
  MelFilterbank bank(config.n_filters, config.fft_size, config.sample_rate, config.f_low, config.upper_hz());
  const std::size_t width = config.mfcc ? config.n_mfcc : config.n_filters;
  Tensor out({frames.size(), width});
  for (std::size_t t = 0; t < frames.size(); ++t) {
    auto row = log_energies(frames[t], config, bank);
    if (config.mfcc) row = mfcc_from_mfec(row, config.n_mfcc);
    std::copy(row.begin(), row.end(), out.data().begin() + static_cast<std::ptrdiff_t>(t * width));
  }
  return out;
}

SpeechCube build_speech_cube(const AudioClip& clip, const FeatureConfig& config) {
  Tensor stat = static_features(clip, config);
  auto [d1, d2] = temporal_derivatives(stat, config.delta_window);
  const std::size_t t_len = stat.extent(0);
  const std::size_t f_len = stat.extent(1);
  Tensor cube({t_len, f_len, 3});
  auto c = cube.data();
  for (std::size_t i = 0; i < t_len * f_len; ++i) {
    c[3 * i + 0] = stat[i];
    c[3 * i + 1] = d1[i];
    c[3 * i + 2] = d2[i];
  }
  SpeechCube out;
  out.values = standardize(cube);
  return out;
}

}  // namespace avsync
