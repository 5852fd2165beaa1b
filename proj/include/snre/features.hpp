// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_FEATURES_HPP
#define SNRE_FEATURES_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snre/noise_tracker.hpp"
#include "snre/speech_psd.hpp"
#include "snre/stft.hpp"

namespace snre {

/// The four network input families. Kinds based on SNR ratios are invariant
/// to the overall signal level; the log-periodogram kinds are not.
enum class FeatureKind : std::uint32_t {
  kLogPeriodogram = 0,                // noisy log-spectra
  kLogPeriodogramPlusNoisePsd = 1,    // noise-aware variant
  kLogAprioriSnr = 2,
  kLogAposterioriSnr = 3,
  kLogAprioriPlusAposteriori = 4,
};

constexpr int kDefaultContext = 3;  // past frames appended to each vector

/// Per-frame dimensionality before context stacking (n_bins or 2 * n_bins).
int feature_base_dim(FeatureKind kind, int n_bins);
bool feature_needs_speech_psd(FeatureKind kind);

/// CLI spellings: "y", "y+n", "xi", "gamma", "xi+gamma".
const char* feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

struct FeatureStream {
  FeatureKind kind;
  std::vector<std::vector<double>> vectors;  // context-stacked, all same dim

  int n_frames() const { return static_cast<int>(vectors.size()); }
  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors[0].size()); }
};

/// ln(|Y_k|^2 + 1e-12); the floor keeps digital silence finite.
std::vector<double> log_periodogram(std::span<const std::complex<double>> frame);

struct SnrFeatures {
  std::vector<double> log_apriori;      // ln(speech PSD / noise PSD)
  std::vector<double> log_aposteriori;  // ln(|Y|^2 / noise PSD + 1e-12)
};

SnrFeatures snr_features(std::span<const double> noisy_power,
                         std::span<const double> speech_psd,
                         std::span<const double> noise_psd);

/// output[l] = concat(v[l], v[l-1], ..., v[l-context]) with indices below 0
/// replaced by v[0]; no future context.
std::vector<std::vector<double>> stack_context(
    const std::vector<std::vector<double>>& per_frame, int context);

/// Drive the estimators frame by frame over the spectrogram and assemble the
/// context-stacked stream for one kind. The estimator values used for frame l
/// are the ones produced after consuming frame l. States must be initialized
/// (tracker via init_noise_tracker; TCS initializes itself on first use).
FeatureStream extract_features(const Spectrogram& noisy, FeatureKind kind,
                               NoiseTrackState& tracker, TcsState& tcs,
                               const NoiseTrackerConfig& tracker_config,
                               const TcsConfig& tcs_config,
                               int context = kDefaultContext);

/// Binary dump, little-endian: magic "SNRFEAT1", u32 kind id, u32 frame
/// count, u32 dimension, then row-major 64-bit floats.
void write_feature_dump(const FeatureStream& stream, const std::string& path);
FeatureStream read_feature_dump(const std::string& path);

}  // namespace snre

#endif  // SNRE_FEATURES_HPP
