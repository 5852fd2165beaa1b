// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_CONFIG_FILE_HPP
#define SNRE_CONFIG_FILE_HPP

#include <string>

#include "snre/mlp.hpp"
#include "snre/noise_tracker.hpp"
#include "snre/speech_psd.hpp"
#include "snre/stft.hpp"

namespace snre {

/// Everything the CLI can configure from a file. CLI flags override these.
struct ToolConfig {
  StftConfig stft;
  NoiseTrackerConfig tracker;
  TcsConfig tcs;
  TrainConfig train;
  double g_min_db = -20.0;
  double init_seconds = 2.0;
  int context = 3;

  double g_min() const;
  /// Keep dependent fields (TCS sample rate) in sync and validate everything.
  void finalize();
};

/// Flat `key = value` file with '#' comments; dotted keys mirror the config
/// structs (stft.frame_len, tracker.beta, tcs.alpha_env, enhance.g_min_db,
/// train.batch_size, dataset.init_seconds, ...). Unknown keys are errors and
/// cite the line number.
void apply_config_file(ToolConfig& config, const std::string& path);

}  // namespace snre

#endif  // SNRE_CONFIG_FILE_HPP
