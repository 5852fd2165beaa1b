// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/features.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "snre/errors.hpp"

namespace snre {

namespace {

constexpr double kLogFloor = 1e-12;
constexpr char kFeatureMagic[8] = {'S', 'N', 'R', 'F', 'E', 'A', 'T', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

int feature_base_dim(FeatureKind kind, int n_bins) {
  switch (kind) {
    case FeatureKind::kLogPeriodogram:
    case FeatureKind::kLogAprioriSnr:
    case FeatureKind::kLogAposterioriSnr:
      return n_bins;
    case FeatureKind::kLogPeriodogramPlusNoisePsd:
    case FeatureKind::kLogAprioriPlusAposteriori:
      return 2 * n_bins;
  }
  throw ConfigError("feature_base_dim: unknown kind");
}

bool feature_needs_speech_psd(FeatureKind kind) {
  return kind == FeatureKind::kLogAprioriSnr ||
         kind == FeatureKind::kLogAprioriPlusAposteriori;
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLogPeriodogram: return "y";
    case FeatureKind::kLogPeriodogramPlusNoisePsd: return "y+n";
    case FeatureKind::kLogAprioriSnr: return "xi";
    case FeatureKind::kLogAposterioriSnr: return "gamma";
    case FeatureKind::kLogAprioriPlusAposteriori: return "xi+gamma";
  }
  return "?";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  if (name == "y") return FeatureKind::kLogPeriodogram;
  if (name == "y+n") return FeatureKind::kLogPeriodogramPlusNoisePsd;
  if (name == "xi") return FeatureKind::kLogAprioriSnr;
  if (name == "gamma") return FeatureKind::kLogAposterioriSnr;
  if (name == "xi+gamma") return FeatureKind::kLogAprioriPlusAposteriori;
  return std::nullopt;
}

std::vector<double> log_periodogram(std::span<const std::complex<double>> frame) {
  std::vector<double> out(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    out[k] = std::log(std::norm(frame[k]) + kLogFloor);
  }
  return out;
}

SnrFeatures snr_features(std::span<const double> noisy_power,
                         std::span<const double> speech_psd,
                         std::span<const double> noise_psd) {
  if (noisy_power.size() != speech_psd.size() || noisy_power.size() != noise_psd.size()) {
    throw ShapeError("snr_features: input size mismatch");
  }
  SnrFeatures out;
  out.log_apriori.resize(noisy_power.size());
  out.log_aposteriori.resize(noisy_power.size());
  for (std::size_t k = 0; k < noisy_power.size(); ++k) {
    if (noise_psd[k] <= 0.0 || speech_psd[k] <= 0.0) {
      throw DomainError("snr_features: PSDs must be positive in bin " + std::to_string(k));
    }
    out.log_apriori[k] = std::log(speech_psd[k] / noise_psd[k]);
    out.log_aposteriori[k] = std::log(noisy_power[k] / noise_psd[k] + kLogFloor);
  }
  return out;
}

std::vector<std::vector<double>> stack_context(
    const std::vector<std::vector<double>>& per_frame, int context) {
  if (context < 0) throw ConfigError("stack_context: context must be >= 0");
  std::vector<std::vector<double>> out;
  out.reserve(per_frame.size());
  for (std::size_t ell = 0; ell < per_frame.size(); ++ell) {
    std::vector<double> stacked;
    stacked.reserve(per_frame[ell].size() * (context + 1));
    for (int back = 0; back <= context; ++back) {
      const std::size_t j = ell >= static_cast<std::size_t>(back) ? ell - back : 0;
      stacked.insert(stacked.end(), per_frame[j].begin(), per_frame[j].end());
    }
    out.push_back(std::move(stacked));
  }
  return out;
}

FeatureStream extract_features(const Spectrogram& noisy, FeatureKind kind,
                               NoiseTrackState& tracker, TcsState& tcs,
                               const NoiseTrackerConfig& tracker_config,
                               const TcsConfig& tcs_config, int context) {
  std::vector<std::vector<double>> per_frame;
  per_frame.reserve(noisy.frames.size());
  const bool want_xi = feature_needs_speech_psd(kind);
  for (const auto& frame : noisy.frames) {
    const std::vector<double> power = periodogram(frame);
    const NoiseUpdate nu = update_noise_tracker(tracker, power, tracker_config);
    std::vector<double> vec;
    switch (kind) {
      case FeatureKind::kLogPeriodogram:
        vec = log_periodogram(frame);
        break;
      case FeatureKind::kLogPeriodogramPlusNoisePsd: {
        vec = log_periodogram(frame);
        vec.reserve(2 * vec.size());
        for (double psd : nu.noise_psd) vec.push_back(std::log(psd + kLogFloor));
        break;
      }
      default: {
        std::vector<double> speech;
        if (want_xi) {
          speech = estimate_speech_psd(tcs, power, nu.noise_psd, tcs_config);
        } else {
          speech.assign(power.size(), 1.0);  // unused by the gamma-only kind
        }
        const SnrFeatures snr = snr_features(power, speech, nu.noise_psd);
        if (kind == FeatureKind::kLogAprioriSnr) {
          vec = snr.log_apriori;
        } else if (kind == FeatureKind::kLogAposterioriSnr) {
          vec = snr.log_aposteriori;
        } else {
          vec = snr.log_apriori;
          vec.insert(vec.end(), snr.log_aposteriori.begin(), snr.log_aposteriori.end());
        }
        break;
      }
    }
    per_frame.push_back(std::move(vec));
  }
  FeatureStream stream;
  stream.kind = kind;
  stream.vectors = stack_context(per_frame, context);
  return stream;
}

void write_feature_dump(const FeatureStream& stream, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_feature_dump: cannot open " + path);
  os.write(kFeatureMagic, 8);
  write_u32(os, static_cast<std::uint32_t>(stream.kind));
  write_u32(os, static_cast<std::uint32_t>(stream.vectors.size()));
  write_u32(os, static_cast<std::uint32_t>(stream.dim()));
  for (const auto& vec : stream.vectors) {
    for (double v : vec) write_f64(os, v);
  }
  if (!os) throw IoError("write_feature_dump: write failed for " + path);
}

FeatureStream read_feature_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_feature_dump: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kFeatureMagic, 8) != 0) {
    throw FormatError("read_feature_dump: bad magic, expected SNRFEAT1");
  }
  const std::uint32_t kind_id = read_u32(is);
  const std::uint32_t n_frames = read_u32(is);
  const std::uint32_t dim = read_u32(is);
  if (!is || kind_id > 4) {
    throw FormatError("read_feature_dump: bad header in " + path);
  }
  FeatureStream stream;
  stream.kind = static_cast<FeatureKind>(kind_id);
  stream.vectors.assign(n_frames, std::vector<double>(dim));
  for (auto& vec : stream.vectors) {
    for (double& v : vec) v = read_f64(is);
  }
  if (!is) throw FormatError("read_feature_dump: truncated file " + path);
  return stream;
}

}  // namespace snre
