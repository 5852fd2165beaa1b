// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snre/errors.hpp"

namespace snre {

void EnhanceConfig::validate() const {
  if (g_min <= 0.0 || g_min >= 1.0) {
    throw ConfigError("EnhanceConfig: g_min must be in (0, 1), got " + std::to_string(g_min));
  }
  stft.validate();
  tracker.validate();
  tcs.validate();
  if (path == Path::kMl) {
    if (model == nullptr) throw ConfigError("EnhanceConfig: ML path needs a model");
    const int want = feature_base_dim(kind, stft.n_bins()) * (kDefaultContext + 1);
    if (model->input_dim() != want) {
      throw ConfigError("EnhanceConfig: model input dim " +
                        std::to_string(model->input_dim()) + " does not match kind '" +
                        feature_kind_name(kind) + "' stacked dim " + std::to_string(want));
    }
    if (model->output_dim() != stft.n_bins()) {
      throw ConfigError("EnhanceConfig: model output dim " +
                        std::to_string(model->output_dim()) + " does not match n_bins " +
                        std::to_string(stft.n_bins()));
    }
  }
}

std::vector<double> wiener_gain(std::span<const double> speech_psd,
                                std::span<const double> noise_psd) {
  if (speech_psd.size() != noise_psd.size()) {
    throw ShapeError("wiener_gain: PSD size mismatch");
  }
  std::vector<double> gain(speech_psd.size());
  for (std::size_t k = 0; k < gain.size(); ++k) {
    if (speech_psd[k] <= 0.0 || noise_psd[k] <= 0.0) {
      throw DomainError("wiener_gain: PSDs must be positive in bin " + std::to_string(k));
    }
    gain[k] = speech_psd[k] / (speech_psd[k] + noise_psd[k]);
  }
  return gain;
}

std::vector<std::complex<double>> apply_gain(std::span<const double> gain,
                                             double g_min,
                                             std::span<const std::complex<double>> frame) {
  if (gain.size() != frame.size()) {
    throw ShapeError("apply_gain: gain has " + std::to_string(gain.size()) +
                     " bins, frame has " + std::to_string(frame.size()));
  }
  std::vector<std::complex<double>> out(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    out[k] = std::max(gain[k], g_min) * frame[k];
  }
  return out;
}

namespace {

NoiseTrackState seed_tracker(const Spectrogram& spec, const NoiseTrackerConfig& config) {
  const int n_init = std::min<int>(config.init_frames, spec.n_frames());
  std::vector<std::vector<double>> init_frames;
  init_frames.reserve(n_init);
  for (int ell = 0; ell < n_init; ++ell) {
    init_frames.push_back(periodogram(spec.frames[ell]));
  }
  return init_noise_tracker(init_frames, config);
}

}  // namespace

EnhanceResult enhance(std::span<const double> signal, const EnhanceConfig& config) {
  config.validate();
  const Spectrogram noisy = analyze(signal, config.stft);

  Spectrogram enhanced;
  enhanced.config = noisy.config;
  enhanced.frames.resize(noisy.frames.size());
  EnhanceResult result;
  result.gains.resize(noisy.frames.size());

  if (config.path == EnhanceConfig::Path::kNonMl) {
    NoiseTrackState tracker = seed_tracker(noisy, config.tracker);
    TcsState tcs;
    for (int ell = 0; ell < noisy.n_frames(); ++ell) {
      const std::vector<double> power = periodogram(noisy.frames[ell]);
      const NoiseUpdate nu = update_noise_tracker(tracker, power, config.tracker);
      const std::vector<double> speech_psd =
          estimate_speech_psd(tcs, power, nu.noise_psd, config.tcs);
      std::vector<double> gain = wiener_gain(speech_psd, nu.noise_psd);
      enhanced.frames[ell] = apply_gain(gain, config.g_min, noisy.frames[ell]);
      for (double& g : gain) g = std::max(g, config.g_min);
      result.gains[ell] = std::move(gain);
    }
  } else {
    NoiseTrackState tracker = seed_tracker(noisy, config.tracker);
    TcsState tcs;
    const FeatureStream stream = extract_features(noisy, config.kind, tracker, tcs,
                                                  config.tracker, config.tcs);
    Eigen::VectorXd input(stream.dim());
    for (int ell = 0; ell < noisy.n_frames(); ++ell) {
      const auto& vec = stream.vectors[ell];
      for (std::size_t i = 0; i < vec.size(); ++i) input[static_cast<Eigen::Index>(i)] = vec[i];
      const Eigen::VectorXd mask = forward(*config.model, input);
      std::vector<double> gain(mask.data(), mask.data() + mask.size());
      enhanced.frames[ell] = apply_gain(gain, config.g_min, noisy.frames[ell]);
      for (double& g : gain) g = std::max(g, config.g_min);
      result.gains[ell] = std::move(gain);
    }
  }

  result.signal = synthesize(enhanced);
  result.frames_processed = noisy.n_frames();
  return result;
}

}  // namespace snre
