// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_TRAINING_HPP
#define SNRE_TRAINING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snre/features.hpp"
#include "snre/mlp.hpp"
#include "snre/rng.hpp"
#include "snre/stft.hpp"

namespace snre {

/// One line of a corpus manifest.
struct MixtureSpec {
  std::string speech_path;
  std::string noise_path;
  double snr_db = 0.0;
  double peak_db = -26.0;
  std::uint64_t seed = 0;
  double noise_pad_fraction = 0.15;
};

struct MixOptions {
  double noise_pad_fraction = 0.15;  // noise-only tail after the sentence
  std::size_t lead_samples = 0;      // noise-only span before the sentence
};

/// Aligned mixture components. clean is zero outside the sentence region
/// [sentence_begin, sentence_begin + sentence_len).
struct Mixture {
  std::vector<double> noisy;
  std::vector<double> clean;
  std::vector<double> noise;
  std::size_t sentence_begin = 0;
  std::size_t sentence_len = 0;
  double speech_gain = 0.0;
  double noise_gain = 0.0;
};

/// Scale speech so its peak hits peak_db, place a random noise segment under
/// it so the sentence-extent energy ratio meets snr_db exactly, and append a
/// noise-only pad. The rng draws only the noise segment offset.
Mixture mix(std::span<const double> speech, std::span<const double> noise,
            double snr_db, double peak_db, Rng& rng, const MixOptions& options = {});

/// IRM(k, l) = |S|^2 / (|S|^2 + |N|^2), with 0/0 taken as 0.
std::vector<std::vector<double>> irm_targets(const Spectrogram& clean,
                                             const Spectrogram& noise);

struct TrainingExample {
  FeatureStream features;
  std::vector<std::vector<double>> targets;  // per retained frame, n_bins entries
};

struct DatasetConfig {
  StftConfig stft;
  NoiseTrackerConfig tracker;
  TcsConfig tcs;
  double init_seconds = 2.0;  // estimator warm-up span, removed from outputs
  int context = kDefaultContext;
};

/// Mix one utterance, warm the estimators over an initial noise-only span,
/// and emit aligned features/targets for the frames after that span.
TrainingExample make_training_example(std::span<const double> speech,
                                      std::span<const double> noise, double snr_db,
                                      double peak_db, std::uint64_t seed,
                                      FeatureKind kind, const DatasetConfig& config);

/// Load the referenced WAVs and build every example; utterances are processed
/// in parallel (worker count capped by the SNR_ENHANCE_THREADS environment
/// variable), output order follows the corpus order.
std::vector<TrainingExample> build_dataset(std::span<const MixtureSpec> corpus,
                                           FeatureKind kind, const DatasetConfig& config);

/// Parse a plain-text manifest: one `speech=.. noise=.. snr=.. peak=.. seed=..`
/// mixture per line, '#' comments allowed. Errors cite the line number.
std::vector<MixtureSpec> parse_manifest(const std::string& path);
std::vector<MixtureSpec> parse_manifest_text(const std::string& text,
                                             const std::string& origin);

struct EpochStats {
  double train_loss = 0.0;  // mean per-frame J over the epoch's batches
  double val_loss = 0.0;    // mean per-frame J over the validation set
};

struct TrainResult {
  MlpModel model;  // parameters from the best validation epoch
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double initial_val_loss = 0.0;  // validation J of the untrained model
};

/// True once the best validation loss has not improved by more than
/// min_rel_improvement over the last `window` epochs.
bool should_stop_early(std::span<const double> val_history, int window,
                       double min_rel_improvement);

/// Minibatch AdaGrad training with a seeded utterance-level validation split,
/// per-epoch frame shuffling and the relative-improvement early stop.
TrainResult train(const std::vector<TrainingExample>& dataset,
                  std::span<const int> dims, const TrainConfig& config);

struct AnchorOptions {
  double cutoff_hz = 2000.0;
  int fir_taps = 101;
  double snr_db = -5.0;
  double peak_db = -3.0;
  double g_min = 0.1;         // -20 dB
  double dd_smoothing = 0.9;  // decision-directed weight on the previous frame
  StftConfig stft;
  NoiseTrackerConfig tracker;
};

/// Low-quality anchor stimulus: speech low-passed with a linear-phase FIR,
/// mixed at a poor SNR and enhanced with a decision-directed Wiener filter.
std::vector<double> anchor_signal(std::span<const double> speech,
                                  std::span<const double> noise, Rng& rng,
                                  const AnchorOptions& options = {});

}  // namespace snre

#endif  // SNRE_TRAINING_HPP
