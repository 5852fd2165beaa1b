// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snre/errors.hpp"

namespace snre {

namespace {

constexpr double kSegSnrFloorDb = -10.0;
constexpr double kSegSnrCeilDb = 35.0;
constexpr double kLsdFloor = 1e-10;

struct SegSnrResult {
  double mean;
  std::vector<double> frames;
};

SegSnrResult segmental_snr_impl(std::span<const double> clean,
                                std::span<const double> test, int frame_len, int hop) {
  if (clean.size() != test.size()) {
    throw ShapeError("segmental_snr: signal lengths differ (" +
                     std::to_string(clean.size()) + " vs " + std::to_string(test.size()) + ")");
  }
  if (frame_len < 1 || hop < 1) throw ConfigError("segmental_snr: bad frame geometry");
  if (clean.size() < static_cast<std::size_t>(frame_len)) {
    throw EmptyInputError("segmental_snr: signal shorter than one frame");
  }
  const int n_frames = static_cast<int>((clean.size() - frame_len) / hop) + 1;

  std::vector<double> energies(n_frames);
  double mean_energy = 0.0;
  for (int ell = 0; ell < n_frames; ++ell) {
    double e = 0.0;
    const std::size_t start = static_cast<std::size_t>(ell) * hop;
    for (int n = 0; n < frame_len; ++n) e += clean[start + n] * clean[start + n];
    energies[ell] = e;
    mean_energy += e;
  }
  mean_energy /= n_frames;
  if (mean_energy <= 0.0) {
    throw DegenerateInputError("segmental_snr: clean signal is all zero");
  }

  SegSnrResult result;
  double sum = 0.0;
  for (int ell = 0; ell < n_frames; ++ell) {
    if (energies[ell] < 1e-10 * mean_energy) continue;  // silent reference frame
    const std::size_t start = static_cast<std::size_t>(ell) * hop;
    double err = 0.0;
    for (int n = 0; n < frame_len; ++n) {
      const double d = clean[start + n] - test[start + n];
      err += d * d;
    }
    double snr_db = err > 0.0 ? 10.0 * std::log10(energies[ell] / err) : kSegSnrCeilDb;
    snr_db = std::clamp(snr_db, kSegSnrFloorDb, kSegSnrCeilDb);
    result.frames.push_back(snr_db);
    sum += snr_db;
  }
  if (result.frames.empty()) {
    throw DegenerateInputError("segmental_snr: no frames with usable clean energy");
  }
  result.mean = sum / static_cast<double>(result.frames.size());
  return result;
}

struct LsdResult {
  double value;
  std::vector<double> frames;
};

LsdResult log_spectral_distance_impl(std::span<const double> clean,
                                     std::span<const double> test,
                                     const StftConfig& config) {
  if (clean.size() != test.size()) {
    throw ShapeError("log_spectral_distance: signal lengths differ (" +
                     std::to_string(clean.size()) + " vs " + std::to_string(test.size()) + ")");
  }
  const Spectrogram s = analyze(clean, config);
  const Spectrogram s_hat = analyze(test, config);

  LsdResult result;
  double total = 0.0;
  std::size_t count = 0;
  for (int ell = 0; ell < s.n_frames(); ++ell) {
    double frame_sum = 0.0;
    for (int k = 0; k < s.n_bins(); ++k) {
      const double num = std::norm(s.frames[ell][k]) + kLsdFloor;
      const double den = std::norm(s_hat.frames[ell][k]) + kLsdFloor;
      const double d = 10.0 * std::log10(num / den);
      frame_sum += d * d;
    }
    result.frames.push_back(std::sqrt(frame_sum / s.n_bins()));
    total += frame_sum;
    count += s.n_bins();
  }
  result.value = std::sqrt(total / static_cast<double>(count));
  return result;
}

}  // namespace

double segmental_snr(std::span<const double> clean, std::span<const double> test,
                     int frame_len, int hop) {
  return segmental_snr_impl(clean, test, frame_len, hop).mean;
}

double log_spectral_distance(std::span<const double> clean, std::span<const double> test,
                             const StftConfig& config) {
  return log_spectral_distance_impl(clean, test, config).value;
}

MetricReport evaluate_signals(std::span<const double> clean, std::span<const double> test,
                              const StftConfig& config) {
  MetricReport report;
  SegSnrResult seg = segmental_snr_impl(clean, test, config.frame_len, config.hop);
  LsdResult lsd = log_spectral_distance_impl(clean, test, config);
  report.seg_snr_db = seg.mean;
  report.lsd_db = lsd.value;
  report.seg_snr_frames = std::move(seg.frames);
  report.lsd_frames = std::move(lsd.frames);
  return report;
}

}  // namespace snre
