// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_ENHANCE_HPP
#define SNRE_ENHANCE_HPP

#include <complex>
#include <span>
#include <vector>

#include "snre/features.hpp"
#include "snre/mlp.hpp"
#include "snre/noise_tracker.hpp"
#include "snre/speech_psd.hpp"
#include "snre/stft.hpp"

namespace snre {

struct EnhanceConfig {
  enum class Path { kNonMl, kMl };

  double g_min = 0.1;  // -20 dB; the listening-test variant used -15 dB
  Path path = Path::kNonMl;
  FeatureKind kind = FeatureKind::kLogAprioriPlusAposteriori;  // ML path only
  const MlpModel* model = nullptr;                             // ML path only
  StftConfig stft;
  NoiseTrackerConfig tracker;
  TcsConfig tcs;

  void validate() const;
};

/// G_k = speech_psd_k / (speech_psd_k + noise_psd_k), in (0, 1).
std::vector<double> wiener_gain(std::span<const double> speech_psd,
                                std::span<const double> noise_psd);

/// out_k = max(gain_k, g_min) * Y_k; the phase of Y is untouched.
std::vector<std::complex<double>> apply_gain(std::span<const double> gain,
                                             double g_min,
                                             std::span<const std::complex<double>> frame);

struct EnhanceResult {
  std::vector<double> signal;               // length (n_frames-1)*hop + frame_len
  std::vector<std::vector<double>> gains;   // applied gain per frame/bin, in [g_min, 1]
  int frames_processed = 0;
};

/// Frame-causal enhancement of a whole signal through either path. The ML
/// path extracts the configured features (fresh estimator states seeded from
/// this signal) and applies the predicted mask per frame.
EnhanceResult enhance(std::span<const double> signal, const EnhanceConfig& config);

}  // namespace snre

#endif  // SNRE_ENHANCE_HPP
