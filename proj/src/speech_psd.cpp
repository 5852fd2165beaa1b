// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/speech_psd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "snre/dft.hpp"
#include "snre/errors.hpp"

namespace snre {

void TcsConfig::validate() const {
  if (xi_ml_min <= 0.0) throw ConfigError("TcsConfig: xi_ml_min must be positive");
  if (alpha_env < 0.0 || alpha_env > alpha_high || alpha_high >= 1.0) {
    throw ConfigError("TcsConfig: need 0 <= alpha_env <= alpha_high < 1");
  }
  if (pitch_min_hz <= 0.0 || pitch_max_hz <= pitch_min_hz) {
    throw ConfigError("TcsConfig: need 0 < pitch_min_hz < pitch_max_hz");
  }
  if (sample_rate_hz <= 0) throw ConfigError("TcsConfig: sample_rate_hz must be positive");
  if (pitch_vicinity < 0) throw ConfigError("TcsConfig: pitch_vicinity must be >= 0");
}

std::vector<double> ml_speech_psd(std::span<const double> noisy_power,
                                  std::span<const double> noise_psd,
                                  double xi_ml_min) {
  if (noisy_power.size() != noise_psd.size()) {
    throw ShapeError("ml_speech_psd: power/PSD size mismatch");
  }
  std::vector<double> out(noisy_power.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (noise_psd[k] <= 0.0) {
      throw DomainError("ml_speech_psd: noise PSD must be positive in bin " +
                        std::to_string(k));
    }
    out[k] = noise_psd[k] * std::max(noisy_power[k] / noise_psd[k] - 1.0, xi_ml_min);
  }
  return out;
}

std::vector<double> to_cepstrum(std::span<const double> log_psd_half) {
  const std::size_t n_bins = log_psd_half.size();
  if (n_bins < 2) throw ShapeError("to_cepstrum: need at least 2 bins");
  const std::size_t frame_len = 2 * (n_bins - 1);
  std::vector<std::complex<double>> buf(frame_len);
  for (std::size_t k = 0; k < n_bins; ++k) buf[k] = {log_psd_half[k], 0.0};
  for (std::size_t k = 1; k + 1 < n_bins; ++k) buf[frame_len - k] = {log_psd_half[k], 0.0};
  Dft(frame_len).inverse(buf);
  std::vector<double> ceps(frame_len);
  for (std::size_t q = 0; q < frame_len; ++q) ceps[q] = buf[q].real();
  return ceps;
}

std::vector<double> tcs_smoothing_constants(std::span<const double> ml_cepstrum,
                                            const TcsConfig& config) {
  config.validate();
  const std::size_t len = ml_cepstrum.size();
  if (len < 2 || len % 2 != 0) {
    throw ShapeError("tcs_smoothing_constants: cepstrum length must be even and >= 2");
  }
  const std::size_t half = len / 2;
  const double fs = static_cast<double>(config.sample_rate_hz);

  std::vector<double> alpha(len, config.alpha_high);
  const long env_bins = std::lround(config.env_quefrency_ms * 1e-3 * fs);
  for (std::size_t q = 0; q < len; ++q) {
    const std::size_t q_mirror = q <= half ? q : len - q;
    if (static_cast<long>(q_mirror) < env_bins) alpha[q] = config.alpha_env;
  }

  // Pitch peak search over the plausible fundamental range.
  std::size_t lo = static_cast<std::size_t>(std::ceil(fs / config.pitch_max_hz));
  std::size_t hi = static_cast<std::size_t>(std::floor(fs / config.pitch_min_hz));
  hi = std::min(hi, half);
  if (lo >= 1 && lo <= hi) {
    std::size_t peak = lo;
    for (std::size_t q = lo + 1; q <= hi; ++q) {
      if (ml_cepstrum[q] > ml_cepstrum[peak]) peak = q;
    }
    if (ml_cepstrum[peak] > config.pitch_peak_threshold) {
      const long first = static_cast<long>(peak) - config.pitch_vicinity;
      const long last = static_cast<long>(peak) + config.pitch_vicinity;
      for (long q = std::max(first, long{0}); q <= last && q <= static_cast<long>(half); ++q) {
        alpha[q] = config.alpha_env;
        if (q > 0 && q < static_cast<long>(half)) alpha[len - q] = config.alpha_env;
      }
    }
  }
  return alpha;
}

std::vector<double> smooth_update(TcsState& state,
                                  std::span<const double> ml_cepstrum,
                                  const TcsConfig& config) {
  if (!state.initialized) {
    state.smoothed_cepstrum.assign(ml_cepstrum.begin(), ml_cepstrum.end());
    state.initialized = true;
    return state.smoothed_cepstrum;
  }
  if (ml_cepstrum.size() != state.smoothed_cepstrum.size()) {
    throw ShapeError("smooth_update: got " + std::to_string(ml_cepstrum.size()) +
                     " bins, state has " + std::to_string(state.smoothed_cepstrum.size()));
  }
  const std::vector<double> alpha = tcs_smoothing_constants(ml_cepstrum, config);
  for (std::size_t q = 0; q < ml_cepstrum.size(); ++q) {
    state.smoothed_cepstrum[q] =
        (1.0 - alpha[q]) * ml_cepstrum[q] + alpha[q] * state.smoothed_cepstrum[q];
  }
  return state.smoothed_cepstrum;
}

std::vector<double> from_cepstrum(std::span<const double> smoothed_cepstrum,
                                  double kappa) {
  const std::size_t len = smoothed_cepstrum.size();
  if (len < 2 || len % 2 != 0) {
    throw ShapeError("from_cepstrum: cepstrum length must be even and >= 2");
  }
  std::vector<std::complex<double>> buf(len);
  for (std::size_t q = 0; q < len; ++q) buf[q] = {smoothed_cepstrum[q], 0.0};
  Dft(len).forward(buf);
  std::vector<double> psd(len / 2 + 1);
  for (std::size_t k = 0; k < psd.size(); ++k) {
    psd[k] = std::exp(buf[k].real() + kappa);
  }
  return psd;
}

std::vector<double> estimate_speech_psd(TcsState& state,
                                        std::span<const double> noisy_power,
                                        std::span<const double> noise_psd,
                                        const TcsConfig& config) {
  std::vector<double> ml = ml_speech_psd(noisy_power, noise_psd, config.xi_ml_min);
  for (double& v : ml) v = std::log(v);
  const std::vector<double> ceps = to_cepstrum(ml);
  const std::vector<double> smoothed = smooth_update(state, ceps, config);
  return from_cepstrum(smoothed, config.kappa);
}

}  // namespace snre
