// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_SPEECH_PSD_HPP
#define SNRE_SPEECH_PSD_HPP

#include <span>
#include <vector>

namespace snre {

/// Temporal cepstrum smoothing of the maximum-likelihood speech PSD.
/// Envelope quefrencies (below env_quefrency_ms) and the detected pitch peak
/// get weak smoothing, everything else strong smoothing, and the exp/log bias
/// of the smoothed estimate is compensated by kappa on the way back.
struct TcsConfig {
  double xi_ml_min = 1e-2;           // floor of the ML a priori SNR
  double kappa = 0.28860783245076643;  // half the Euler-Mascheroni constant
  double alpha_env = 0.2;
  double alpha_high = 0.96;
  double env_quefrency_ms = 2.5;
  double pitch_min_hz = 70.0;
  double pitch_max_hz = 400.0;
  double pitch_peak_threshold = 0.2;
  int pitch_vicinity = 1;
  int sample_rate_hz = 16000;

  void validate() const;
};

struct TcsState {
  std::vector<double> smoothed_cepstrum;
  bool initialized = false;
};

/// Limited maximum-likelihood speech PSD:
///   psd[k] = noise_psd[k] * max(|Y_k|^2 / noise_psd[k] - 1, xi_ml_min).
std::vector<double> ml_speech_psd(std::span<const double> noisy_power,
                                  std::span<const double> noise_psd,
                                  double xi_ml_min);

/// Half log-spectrum -> real cepstrum of length 2 * (n_bins - 1), via
/// conjugate-symmetric extension and inverse DFT.
std::vector<double> to_cepstrum(std::span<const double> log_psd_half);

/// Per-quefrency smoothing constants for one frame (exposed so tests can
/// enumerate the schedule). Mirror bins copy their lower-half partner.
std::vector<double> tcs_smoothing_constants(std::span<const double> ml_cepstrum,
                                            const TcsConfig& config);

/// First call copies the input into the state; afterwards
/// out = (1 - alpha_q) * input + alpha_q * state, per bin.
std::vector<double> smooth_update(TcsState& state,
                                  std::span<const double> ml_cepstrum,
                                  const TcsConfig& config);

/// Cepstrum -> speech PSD (first len/2 + 1 bins): exp(DFT(c)[k] + kappa).
std::vector<double> from_cepstrum(std::span<const double> smoothed_cepstrum,
                                  double kappa);

/// Full chain: ML estimate, log, cepstral smoothing, bias-corrected
/// back-transform. noisy_power/noise_psd are one-sided (n_bins entries).
std::vector<double> estimate_speech_psd(TcsState& state,
                                        std::span<const double> noisy_power,
                                        std::span<const double> noise_psd,
                                        const TcsConfig& config);

}  // namespace snre

#endif  // SNRE_SPEECH_PSD_HPP
