// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_METRICS_HPP
#define SNRE_METRICS_HPP

#include <span>
#include <vector>

#include "snre/stft.hpp"

namespace snre {

struct MetricReport {
  double seg_snr_db = 0.0;
  double lsd_db = 0.0;
  std::vector<double> seg_snr_frames;  // clamped per-frame values actually averaged
  std::vector<double> lsd_frames;      // per-frame RMS log-spectral distance
};

/// Frame-wise 10 log10(sum s^2 / sum (s - s_hat)^2), clamped to [-10, 35] dB;
/// frames whose clean energy is below 1e-10 x the mean frame energy are
/// skipped. Returns the mean over retained frames.
double segmental_snr(std::span<const double> clean, std::span<const double> test,
                     int frame_len, int hop);

/// sqrt(mean over frames and bins of (10 log10((|S|^2 + f) / (|S_hat|^2 + f)))^2)
/// with floor f = 1e-10.
double log_spectral_distance(std::span<const double> clean, std::span<const double> test,
                             const StftConfig& config);

MetricReport evaluate_signals(std::span<const double> clean, std::span<const double> test,
                              const StftConfig& config);

}  // namespace snre

#endif  // SNRE_METRICS_HPP
