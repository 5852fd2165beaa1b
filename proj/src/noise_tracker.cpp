// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/noise_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snre/errors.hpp"

namespace snre {

void NoiseTrackerConfig::validate() const {
  if (xi_h1 <= 0.0) throw ConfigError("NoiseTrackerConfig: xi_h1 must be positive");
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("NoiseTrackerConfig: beta must be in [0, 1)");
  if (spp_smooth < 0.0 || spp_smooth >= 1.0) {
    throw ConfigError("NoiseTrackerConfig: spp_smooth must be in [0, 1)");
  }
  if (spp_clamp <= 0.0 || spp_clamp >= 1.0) {
    throw ConfigError("NoiseTrackerConfig: spp_clamp must be in (0, 1)");
  }
  if (init_frames < 1) throw ConfigError("NoiseTrackerConfig: init_frames must be >= 1");
}

NoiseTrackState init_noise_tracker(std::span<const std::vector<double>> periodograms,
                                   const NoiseTrackerConfig& config) {
  config.validate();
  if (periodograms.empty()) {
    throw EmptyInputError("init_noise_tracker: no initialization frames");
  }
  const std::size_t n_bins = periodograms[0].size();
  std::vector<double> mean(n_bins, 0.0);
  double total = 0.0;
  for (const auto& frame : periodograms) {
    if (frame.size() != n_bins) {
      throw ShapeError("init_noise_tracker: inconsistent frame sizes");
    }
    for (std::size_t k = 0; k < n_bins; ++k) {
      if (frame[k] < 0.0) {
        throw DomainError("init_noise_tracker: negative periodogram entry");
      }
      mean[k] += frame[k];
      total += frame[k];
    }
  }
  const double n_frames = static_cast<double>(periodograms.size());
  const double mean_power = total / (n_frames * static_cast<double>(n_bins));
  double floor = 1e-12 * mean_power;
  if (floor <= 0.0) floor = 1e-30;  // all-silent init must still give a positive PSD

  NoiseTrackState state;
  state.noise_psd.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    state.noise_psd[k] = std::max(mean[k] / n_frames, floor);
  }
  state.spp_bar.assign(n_bins, 0.0);
  state.frames_seen = static_cast<long>(periodograms.size());
  return state;
}

double speech_presence_prob(double noisy_power, double prev_noise_psd, double xi_h1) {
  if (prev_noise_psd <= 0.0) {
    throw DomainError("speech_presence_prob: noise PSD must be positive, got " +
                      std::to_string(prev_noise_psd));
  }
  const double snr_term = noisy_power / prev_noise_psd * xi_h1 / (1.0 + xi_h1);
  return 1.0 / (1.0 + (1.0 + xi_h1) * std::exp(-snr_term));
}

NoiseUpdate update_noise_tracker(NoiseTrackState& state,
                                 std::span<const double> noisy_power,
                                 const NoiseTrackerConfig& config) {
  if (state.noise_psd.empty()) {
    throw DomainError("update_noise_tracker: state not initialized");
  }
  if (noisy_power.size() != state.noise_psd.size()) {
    throw ShapeError("update_noise_tracker: got " + std::to_string(noisy_power.size()) +
                     " bins, state has " + std::to_string(state.noise_psd.size()));
  }
  const std::size_t n_bins = noisy_power.size();
  NoiseUpdate out;
  out.noise_psd.resize(n_bins);
  out.spp.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (noisy_power[k] < 0.0) {
      throw DomainError("update_noise_tracker: negative power in bin " + std::to_string(k));
    }
    double p = speech_presence_prob(noisy_power[k], state.noise_psd[k], config.xi_h1);
    state.spp_bar[k] = config.spp_smooth * state.spp_bar[k] + (1.0 - config.spp_smooth) * p;
    if (state.spp_bar[k] > config.spp_clamp) {
      p = std::min(p, config.spp_clamp);
    }
    const double noise_periodogram =
        (1.0 - p) * noisy_power[k] + p * state.noise_psd[k];
    state.noise_psd[k] =
        (1.0 - config.beta) * noise_periodogram + config.beta * state.noise_psd[k];
    out.noise_psd[k] = state.noise_psd[k];
    out.spp[k] = p;
  }
  ++state.frames_seen;
  return out;
}

}  // namespace snre
