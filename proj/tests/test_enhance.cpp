#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "snre/enhance.hpp"
#include "snre/errors.hpp"
#include "snre/metrics.hpp"
#include "snre/rng.hpp"
#include "snre/stft.hpp"
#include "synth.hpp"

using namespace snre;

namespace {

// Model that always outputs 0.5: zero weights keep every pre-activation at 0.
MlpModel constant_half_model(int input_dim, int output_dim) {
  MlpModel model = glorot_init(std::vector<int>{input_dim, 1, output_dim}, 0);
  for (auto& layer : model.layers) {
    layer.weights.setZero();
    layer.bias.setZero();
  }
  return model;
}

std::vector<double> noisy_speech(std::size_t n, double snr_scale, std::uint64_t seed) {
  Rng rng(seed);
  auto x = synth::harmonic_speech(static_cast<double>(n) / 16000.0, 16000, rng);
  const auto noise = synth::white_noise(n, rng, 1.0);
  double es = 0.0, en = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    es += x[i] * x[i];
    en += noise[i] * noise[i];
  }
  const double gain = std::sqrt(es / en) * snr_scale;
  for (std::size_t i = 0; i < n; ++i) x[i] = 0.3 * (x[i] + gain * noise[i]);
  return x;
}

double interior_energy(const std::vector<double>& x, int frame_len, std::size_t limit) {
  double e = 0.0;
  for (std::size_t i = frame_len; i < limit; ++i) e += x[i] * x[i];
  return e;
}

}  // namespace

TEST_CASE("wiener_gain values and limits") {
  CHECK(wiener_gain(std::vector<double>{1.0}, std::vector<double>{1.0})[0] == 0.5);
  CHECK(wiener_gain(std::vector<double>{1.0}, std::vector<double>{3.0})[0] ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(wiener_gain(std::vector<double>{1.0}, std::vector<double>{1e-12})[0] >
        1.0 - 1e-9);
  for (double g : wiener_gain(std::vector<double>{0.3, 5.0}, std::vector<double>{1.0, 0.1})) {
    CHECK(g > 0.0);
    CHECK(g < 1.0);
  }
  CHECK_THROWS_AS(wiener_gain(std::vector<double>{0.0}, std::vector<double>{1.0}),
                  DomainError);
  CHECK_THROWS_AS(wiener_gain(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  ShapeError);
}

TEST_CASE("apply_gain floors, preserves identity and phase") {
  const std::vector<std::complex<double>> frame{{1.0, 2.0}, {-3.0, 0.5}, {0.0, -1.0}};

  SUBCASE("floor engages") {
    const auto out = apply_gain(std::vector<double>{0.05, 0.05, 0.05}, 0.1, frame);
    for (std::size_t k = 0; k < frame.size(); ++k) {
      CHECK(out[k] == 0.1 * frame[k]);
    }
  }
  SUBCASE("unit gain is the identity") {
    const auto out = apply_gain(std::vector<double>{1.0, 1.0, 1.0}, 0.1, frame);
    for (std::size_t k = 0; k < frame.size(); ++k) CHECK(out[k] == frame[k]);
  }
  SUBCASE("phase is untouched") {
    Rng rng(13);
    std::vector<std::complex<double>> random_frame(64);
    std::vector<double> gain(64);
    for (std::size_t k = 0; k < 64; ++k) {
      random_frame[k] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      gain[k] = rng.uniform(0.0, 1.5);
    }
    const auto out = apply_gain(gain, 0.1, random_frame);
    for (std::size_t k = 0; k < 64; ++k) {
      // Cross product of in/out as 2-vectors vanishes for a real multiplier.
      const double cross = out[k].imag() * random_frame[k].real() -
                           out[k].real() * random_frame[k].imag();
      CHECK(std::abs(cross) <= 1e-12 * std::abs(out[k]) * std::abs(random_frame[k]) + 1e-300);
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(apply_gain(std::vector<double>{1.0}, 0.1, frame), ShapeError);
  }
}

TEST_CASE("enhance of silence is silence") {
  EnhanceConfig config;
  const EnhanceResult result = enhance(std::vector<double>(4096, 0.0), config);
  for (double v : result.signal) CHECK(v == 0.0);
  CHECK(result.frames_processed == (4096 - 512) / 256 + 1);
}

TEST_CASE("non-ML path improves segmental SNR at 0 dB") {
  const std::size_t n = 3 * 16000;
  Rng rng(7);
  auto clean = synth::harmonic_speech(3.0, 16000, rng);
  auto noise = synth::white_noise(n, rng, 1.0);
  double es = 0.0, en = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    es += clean[i] * clean[i];
    en += noise[i] * noise[i];
  }
  const double noise_gain = std::sqrt(es / en);  // 0 dB overall
  std::vector<double> noisy(n);
  for (std::size_t i = 0; i < n; ++i) {
    clean[i] *= 0.3;
    noisy[i] = clean[i] + 0.3 * noise_gain * noise[i];
  }

  EnhanceConfig config;
  const EnhanceResult result = enhance(noisy, config);

  const std::size_t len = result.signal.size();
  const std::vector<double> clean_crop(clean.begin(), clean.begin() + len);
  const std::vector<double> noisy_crop(noisy.begin(), noisy.begin() + len);
  const double before = segmental_snr(clean_crop, noisy_crop, 512, 256);
  const double after = segmental_snr(clean_crop, result.signal, 512, 256);
  CHECK(after > before);
}

TEST_CASE("ML path with a constant-0.5 model halves the round trip") {
  StftConfig stft;
  const MlpModel model = constant_half_model(1028, stft.n_bins());
  EnhanceConfig config;
  config.path = EnhanceConfig::Path::kMl;
  config.kind = FeatureKind::kLogAposterioriSnr;
  config.model = &model;

  const auto x = noisy_speech(8000, 1.0, 31);
  const EnhanceResult result = enhance(x, config);
  const auto round_trip = synthesize(analyze(x, stft));
  REQUIRE(result.signal.size() == round_trip.size());
  for (std::size_t i = 0; i < result.signal.size(); ++i) {
    CHECK(result.signal[i] == doctest::Approx(0.5 * round_trip[i]).epsilon(1e-10));
  }
  for (const auto& frame : result.gains) {
    for (double g : frame) CHECK(g == 0.5);
  }
}

TEST_CASE("gains are bounded and energy does not grow, both paths") {
  const auto x = noisy_speech(16000, 0.5, 77);
  StftConfig stft;
  const MlpModel model = glorot_init(std::vector<int>{2056, 16, stft.n_bins()}, 5);

  for (int path = 0; path < 2; ++path) {
    EnhanceConfig config;
    if (path == 1) {
      config.path = EnhanceConfig::Path::kMl;
      config.kind = FeatureKind::kLogAprioriPlusAposteriori;
      config.model = &model;
    }
    const EnhanceResult result = enhance(x, config);
    for (const auto& frame : result.gains) {
      for (double g : frame) {
        CHECK(g >= config.g_min);
        CHECK(g <= 1.0);
      }
    }
    const std::size_t limit = result.signal.size() - 512;
    const double in_energy = interior_energy(x, 512, limit);
    const double out_energy = interior_energy(result.signal, 512, limit);
    CHECK(out_energy <= in_energy * (1.0 + 1e-9));
    CHECK(out_energy >= in_energy * config.g_min * config.g_min * (1.0 - 1e-9));
  }
}

TEST_CASE("ML path commutes with scaling for SNR features") {
  StftConfig stft;
  const MlpModel model = glorot_init(std::vector<int>{2056, 24, stft.n_bins()}, 9);
  EnhanceConfig config;
  config.path = EnhanceConfig::Path::kMl;
  config.kind = FeatureKind::kLogAprioriPlusAposteriori;
  config.model = &model;

  const auto x = noisy_speech(12000, 1.0, 13);
  const EnhanceResult base = enhance(x, config);
  for (const double c : {10.0, 0.01}) {
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= c;
    const EnhanceResult result = enhance(scaled, config);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < base.signal.size(); ++i) {
      const double d = result.signal[i] - c * base.signal[i];
      err += d * d;
      ref += c * base.signal[i] * c * base.signal[i];
    }
    CHECK(std::sqrt(err / ref) <= 1e-6);
  }
}

TEST_CASE("configuration errors") {
  EnhanceConfig config;
  config.g_min = 1.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = {};
  config.path = EnhanceConfig::Path::kMl;
  CHECK_THROWS_AS(config.validate(), ConfigError);  // no model

  const MlpModel model = glorot_init(std::vector<int>{1028, 8, 257}, 1);
  config.model = &model;
  config.kind = FeatureKind::kLogAprioriPlusAposteriori;  // wants 2056
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("1028") != std::string::npos);
    CHECK(what.find("2056") != std::string::npos);
  }
  config.kind = FeatureKind::kLogAposterioriSnr;  // 1028 matches
  config.validate();
}
