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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avsync/audio.hpp"
#include "avsync/tensor.hpp"

namespace avsync {

enum class WindowKind { kHamming, kRectangular };

/// Speech front-end settings. Defaults give 20 ms non-overlapping frames,
/// 40 HTK-mel filters over 0 Hz .. Nyquist and a 512-point FFT.
struct FeatureConfig {
  double sample_rate = 16000.0;
  double window_ms = 20.0;
  double overlap = 0.0;
  std::size_t fft_size = 512;
  std::size_t n_filters = 40;
  double f_low = 0.0;
  double f_high = 0.0;  // <= 0 selects sample_rate / 2
  WindowKind window = WindowKind::kHamming;
  std::size_t delta_window = 2;
  double duration_s = 0.3;  // <= 0 uses the whole clip
  double energy_floor = 1e-10;
  bool mfcc = false;
  std::size_t n_mfcc = 13;

  double upper_hz() const { return f_high > 0 ? f_high : sample_rate / 2; }
  std::size_t frame_length() const;
  std::size_t hop_length() const;
  void validate() const;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Splits the clip into frames of window_ms with the given fractional overlap.
/// The trailing partial frame is dropped.
std::vector<std::vector<Real>> frame_signal(const AudioClip& clip, double window_ms = 20.0, double overlap = 0.0);

/// Triangular filters on the HTK mel scale, sampled at the FFT bin centers.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate, double f_low, double f_high);

  std::size_t size() const { return n_filters_; }
  std::size_t n_bins() const { return n_bins_; }
  double center_hz(std::size_t filter) const { return centers_hz_.at(filter); }
  std::span<const Real> weights(std::size_t filter) const {
    return std::span<const Real>(weights_).subspan(filter * n_bins_, n_bins_);
  }
  /// Filter energies for a one-sided power spectrum of n_bins() entries.
  std::vector<Real> apply(std::span<const Real> power) const;

 private:
  std::size_t n_filters_;
  std::size_t n_bins_;
  std::vector<double> centers_hz_;
  std::vector<Real> weights_;
};

/// One-sided power spectrum |X_k|^2 / fft_size, k = 0 .. fft_size / 2, of the
/// windowed frame zero-padded to fft_size.
std::vector<Real> power_spectrum(std::span<const Real> frame, std::size_t fft_size, WindowKind window);

/// Log mel filterbank energies (MFEC) of a single frame: log(energy + floor).
std::vector<Real> mel_filterbank_energies(std::span<const Real> frame, const FeatureConfig& config);

/// Orthonormal type-II cosine transform and its inverse.
std::vector<Real> dct_ii(std::span<const Real> x);
std::vector<Real> dct_iii(std::span<const Real> x);

/// Cepstral coefficients: the first n_coeffs of the orthonormal DCT-II of an MFEC vector.
std::vector<Real> mfcc_from_mfec(std::span<const Real> mfec, std::size_t n_coeffs = 13);

/// Regression deltas over the time axis of a [T x F] matrix, replicating the
/// boundary frames. Returns (delta, delta-delta), both [T x F].
std::pair<Tensor, Tensor> temporal_derivatives(const Tensor& features, std::size_t window = 2);

/// (x - mean) / max(std, eps) using population statistics over every element.
Tensor standardize(const Tensor& x, Real eps = Real(1e-8));

/// Static log-energy matrix [T x n_filters] (or [T x n_mfcc] in MFCC mode)
/// for the configured duration of the clip.
Tensor static_features(const AudioClip& clip, const FeatureConfig& config);

/// Standardized [T x F x 3] volume: static features, delta, delta-delta.
struct SpeechCube {
  Tensor values;
  std::string clip_id;
  double start_s = 0.0;
};

SpeechCube build_speech_cube(const AudioClip& clip, const FeatureConfig& config = {});

}  // namespace avsync
