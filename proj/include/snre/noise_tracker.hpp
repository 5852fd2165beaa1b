// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_NOISE_TRACKER_HPP
#define SNRE_NOISE_TRACKER_HPP

#include <span>
#include <vector>

namespace snre {

/// Streaming speech-presence-probability noise PSD tracker.
struct NoiseTrackerConfig {
  double xi_h1 = 0.03162277660168379;  // 10^(-15/10), fixed SNR under H1
  double beta = 0.8;                  // temporal PSD smoothing
  double spp_smooth = 0.9;            // stagnation memory smoothing
  double spp_clamp = 0.99;            // SPP ceiling once the memory saturates
  int init_frames = 5;

  void validate() const;
};

struct NoiseTrackState {
  std::vector<double> noise_psd;  // strictly positive per bin
  std::vector<double> spp_bar;    // smoothed SPP in [0, 1]
  long frames_seen = 0;
};

/// Seed the tracker with the per-bin mean of the first periodograms, floored
/// at 1e-12 x mean input power so later divisions stay defined.
NoiseTrackState init_noise_tracker(std::span<const std::vector<double>> periodograms,
                                   const NoiseTrackerConfig& config);

/// Posterior speech presence probability for a single bin:
///   P = 1 / (1 + (1 + xi) exp(-(|Y|^2 / psd) * xi / (1 + xi)))
/// assuming equal priors for speech presence and absence.
double speech_presence_prob(double noisy_power, double prev_noise_psd, double xi_h1);

struct NoiseUpdate {
  std::vector<double> noise_psd;  // post-update estimate
  std::vector<double> spp;        // SPP actually used (after the clamp)
};

/// One streaming step: SPP, stagnation clamp, MMSE noise periodogram and
/// first-order PSD smoothing. Mutates the state and returns the new values.
NoiseUpdate update_noise_tracker(NoiseTrackState& state,
                                 std::span<const double> noisy_power,
                                 const NoiseTrackerConfig& config);

}  // namespace snre

#endif  // SNRE_NOISE_TRACKER_HPP
