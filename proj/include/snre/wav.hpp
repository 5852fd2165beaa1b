// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_WAV_HPP
#define SNRE_WAV_HPP

#include <span>
#include <string>
#include <vector>

namespace snre {

enum class WavFormat {
  kPcm16,
  kFloat32,
};

struct WavFile {
  std::vector<double> samples;  // mono, in [-1, 1] for PCM sources
  int sample_rate = 0;
  WavFormat format = WavFormat::kPcm16;
};

/// Mono RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float. Anything else
/// is a FormatError; unknown chunks are skipped.
WavFile read_wav(const std::string& path);

void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate, WavFormat format);

}  // namespace snre

#endif  // SNRE_WAV_HPP
