// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/stft.hpp"

#include <cmath>
#include <string>

#include "snre/dft.hpp"
#include "snre/errors.hpp"

namespace snre {

void StftConfig::validate() const {
  if (sample_rate_hz <= 0) {
    throw ConfigError("StftConfig: sample_rate_hz must be positive");
  }
  if (frame_len < 4 || frame_len % 2 != 0) {
    throw ConfigError("StftConfig: frame_len must be even and >= 4, got " +
                      std::to_string(frame_len));
  }
  if (hop * 2 != frame_len) {
    throw ConfigError("StftConfig: hop * 2 must equal frame_len (50 % overlap), got hop=" +
                      std::to_string(hop) + " frame_len=" + std::to_string(frame_len));
  }
}

std::vector<double> sqrt_hann_window(int frame_len) {
  if (frame_len < 4 || frame_len % 2 != 0) {
    throw ConfigError("sqrt_hann_window: frame_len must be even and >= 4, got " +
                      std::to_string(frame_len));
  }
  std::vector<double> w(frame_len);
  for (int n = 0; n < frame_len; ++n) {
    w[n] = std::sqrt(0.5 - 0.5 * std::cos(2.0 * M_PI * n / frame_len));
  }
  return w;
}

Spectrogram analyze(std::span<const double> signal, const StftConfig& config) {
  config.validate();
  const int frame_len = config.frame_len;
  if (static_cast<int>(signal.size()) < frame_len) {
    throw EmptyInputError("analyze: signal shorter than one frame (" +
                          std::to_string(signal.size()) + " < " +
                          std::to_string(frame_len) + ")");
  }
  const int n_frames =
      static_cast<int>((signal.size() - frame_len) / config.hop) + 1;
  const int n_bins = config.n_bins();
  const std::vector<double> window = sqrt_hann_window(frame_len);
  const Dft dft(frame_len);

  Spectrogram spec;
  spec.config = config;
  spec.frames.resize(n_frames);
  std::vector<std::complex<double>> buf(frame_len);
  for (int ell = 0; ell < n_frames; ++ell) {
    const std::size_t start = static_cast<std::size_t>(ell) * config.hop;
    for (int n = 0; n < frame_len; ++n) {
      buf[n] = {signal[start + n] * window[n], 0.0};
    }
    dft.forward(buf);
    spec.frames[ell].assign(buf.begin(), buf.begin() + n_bins);
  }
  return spec;
}

std::vector<double> synthesize(const Spectrogram& spec) {
  spec.config.validate();
  if (spec.frames.empty()) {
    throw EmptyInputError("synthesize: spectrogram has no frames");
  }
  const int frame_len = spec.config.frame_len;
  const int hop = spec.config.hop;
  const int n_bins = spec.config.n_bins();
  const std::vector<double> window = sqrt_hann_window(frame_len);
  const Dft dft(frame_len);

  const std::size_t out_len =
      static_cast<std::size_t>(spec.n_frames() - 1) * hop + frame_len;
  std::vector<double> out(out_len, 0.0);
  std::vector<std::complex<double>> buf(frame_len);
  for (int ell = 0; ell < spec.n_frames(); ++ell) {
    const auto& frame = spec.frames[ell];
    if (static_cast<int>(frame.size()) != n_bins) {
      throw ShapeError("synthesize: frame " + std::to_string(ell) + " has " +
                       std::to_string(frame.size()) + " bins, expected " +
                       std::to_string(n_bins));
    }
    for (int k = 0; k < n_bins; ++k) buf[k] = frame[k];
    for (int k = 1; k < n_bins - 1; ++k) buf[frame_len - k] = std::conj(frame[k]);
    dft.inverse(buf);
    const std::size_t start = static_cast<std::size_t>(ell) * hop;
    for (int n = 0; n < frame_len; ++n) {
      out[start + n] += buf[n].real() * window[n];
    }
  }
  return out;
}

std::vector<double> periodogram(std::span<const std::complex<double>> frame) {
  std::vector<double> p(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) p[k] = std::norm(frame[k]);
  return p;
}

}  // namespace snre
