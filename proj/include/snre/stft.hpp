// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_STFT_HPP
#define SNRE_STFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace snre {

/// Analysis/synthesis geometry. The synthesis path assumes 50 % overlap
/// (hop * 2 == frame_len), which is what makes the square-root Hann pair
/// reconstruct exactly.
struct StftConfig {
  int sample_rate_hz = 16000;
  int frame_len = 512;  // 32 ms at 16 kHz
  int hop = 256;

  int n_bins() const { return frame_len / 2 + 1; }
  void validate() const;  // throws ConfigError on bad geometry
};

/// One-sided complex STFT frames (mirror spectrum omitted).
struct Spectrogram {
  StftConfig config;
  std::vector<std::vector<std::complex<double>>> frames;

  int n_frames() const { return static_cast<int>(frames.size()); }
  int n_bins() const { return config.n_bins(); }
};

/// Periodic square-root Hann window: w[n] = sqrt(0.5 - 0.5 cos(2 pi n / N)),
/// identical for analysis and synthesis. w^2[n] + w^2[n + N/2] == 1.
std::vector<double> sqrt_hann_window(int frame_len);

/// Frame ell covers samples [ell*hop, ell*hop + frame_len); trailing samples
/// shorter than one frame are dropped. Bins 0 and n_bins-1 of every frame
/// come out exactly real.
Spectrogram analyze(std::span<const double> signal, const StftConfig& config);

/// Inverse of analyze() via conjugate-symmetric extension, windowing and
/// overlap-add. Output length is (n_frames - 1) * hop + frame_len.
std::vector<double> synthesize(const Spectrogram& spec);

/// |Y_k|^2 of one frame.
std::vector<double> periodogram(std::span<const std::complex<double>> frame);

}  // namespace snre

#endif  // SNRE_STFT_HPP
