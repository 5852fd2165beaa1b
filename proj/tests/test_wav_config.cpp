#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "snre/config_file.hpp"
#include "snre/errors.hpp"
#include "snre/rng.hpp"
#include "snre/wav.hpp"
#include "synth.hpp"

using namespace snre;

TEST_CASE("float32 WAV round trip preserves samples") {
  Rng rng(1);
  std::vector<double> x(2000);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  write_wav("roundtrip_f32.wav", x, 16000, WavFormat::kFloat32);
  const WavFile wav = read_wav("roundtrip_f32.wav");
  CHECK(wav.sample_rate == 16000);
  CHECK(wav.format == WavFormat::kFloat32);
  REQUIRE(wav.samples.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(wav.samples[i] == static_cast<double>(static_cast<float>(x[i])));
  }
  std::remove("roundtrip_f32.wav");
}

TEST_CASE("pcm16 WAV round trip is within one quantization step") {
  Rng rng(2);
  std::vector<double> x(1500);
  for (double& v : x) v = rng.uniform(-0.9, 0.9);
  write_wav("roundtrip_pcm.wav", x, 16000, WavFormat::kPcm16);
  const WavFile wav = read_wav("roundtrip_pcm.wav");
  CHECK(wav.format == WavFormat::kPcm16);
  REQUIRE(wav.samples.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(wav.samples[i] - x[i]) <= 0.5 / 32768.0);
  }
  std::remove("roundtrip_pcm.wav");
}

TEST_CASE("pcm16 write clamps out-of-range samples") {
  const std::vector<double> x{-2.0, 2.0, 0.0};
  write_wav("clamp.wav", x, 16000, WavFormat::kPcm16);
  const WavFile wav = read_wav("clamp.wav");
  CHECK(wav.samples[0] == -1.0);
  CHECK(wav.samples[1] == doctest::Approx(32767.0 / 32768.0));
  CHECK(wav.samples[2] == 0.0);
  std::remove("clamp.wav");
}

TEST_CASE("non-mono and non-WAVE inputs are rejected") {
  SUBCASE("stereo header") {
    // Hand-built 2-channel PCM file.
    std::ofstream os("stereo.wav", std::ios::binary);
    const unsigned char header[] = {
        'R', 'I', 'F', 'F', 40, 0, 0, 0, 'W', 'A', 'V', 'E',
        'f', 'm', 't', ' ', 16, 0, 0, 0,
        1, 0,        // PCM
        2, 0,        // stereo
        0x80, 0x3e, 0, 0,  // 16000 Hz
        0, 0xfa, 0, 0,
        4, 0, 16, 0,
        'd', 'a', 't', 'a', 4, 0, 0, 0, 0, 0, 0, 0};
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    os.close();
    try {
      read_wav("stereo.wav");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("mono") != std::string::npos);
    }
    std::remove("stereo.wav");
  }
  SUBCASE("not a RIFF file") {
    std::ofstream os("garbage.wav", std::ios::binary);
    os << "this is not audio at all, just filler text to pass 12 bytes";
    os.close();
    CHECK_THROWS_AS(read_wav("garbage.wav"), FormatError);
    std::remove("garbage.wav");
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_wav("missing.wav"), IoError);
  }
}

TEST_CASE("reader reports the stored sample rate") {
  const std::vector<double> x(100, 0.25);
  write_wav("rate.wav", x, 44100, WavFormat::kPcm16);
  CHECK(read_wav("rate.wav").sample_rate == 44100);
  std::remove("rate.wav");
}

TEST_CASE("config file parsing and overrides") {
  {
    std::ofstream os("tool.conf");
    os << "# project defaults\n"
          "stft.frame_len = 64\n"
          "stft.hop = 32\n"
          "tracker.beta = 0.7\n"
          "tcs.alpha_high = 0.9   # weaker smoothing\n"
          "enhance.g_min_db = -15\n"
          "train.batch_size = 64\n"
          "train.rng_seed = 99\n"
          "dataset.init_seconds = 1.5\n";
  }
  ToolConfig config;
  apply_config_file(config, "tool.conf");
  config.finalize();
  CHECK(config.stft.frame_len == 64);
  CHECK(config.stft.hop == 32);
  CHECK(config.tracker.beta == 0.7);
  CHECK(config.tcs.alpha_high == 0.9);
  CHECK(config.g_min_db == -15.0);
  CHECK(config.g_min() == doctest::Approx(std::pow(10.0, -15.0 / 20.0)).epsilon(1e-15));
  CHECK(config.train.batch_size == 64);
  CHECK(config.train.rng_seed == 99);
  CHECK(config.init_seconds == 1.5);
  CHECK(config.tcs.sample_rate_hz == config.stft.sample_rate_hz);
  std::remove("tool.conf");
}

TEST_CASE("config file errors cite the line") {
  SUBCASE("unknown key") {
    {
      std::ofstream os("bad1.conf");
      os << "stft.frame_len = 512\nnot.a.key = 3\n";
    }
    ToolConfig config;
    try {
      apply_config_file(config, "bad1.conf");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad1.conf:2") != std::string::npos);
    }
    std::remove("bad1.conf");
  }
  SUBCASE("bad value") {
    {
      std::ofstream os("bad2.conf");
      os << "tracker.beta = fast\n";
    }
    ToolConfig config;
    try {
      apply_config_file(config, "bad2.conf");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("bad2.conf:1") != std::string::npos);
    }
    std::remove("bad2.conf");
  }
  SUBCASE("missing separator") {
    {
      std::ofstream os("bad3.conf");
      os << "stft.frame_len 512\n";
    }
    ToolConfig config;
    CHECK_THROWS_AS(apply_config_file(config, "bad3.conf"), ConfigError);
    std::remove("bad3.conf");
  }
  SUBCASE("missing file") {
    ToolConfig config;
    CHECK_THROWS_AS(apply_config_file(config, "missing.conf"), IoError);
  }
}

TEST_CASE("finalize validates the combined configuration") {
  ToolConfig config;
  config.g_min_db = 3.0;
  CHECK_THROWS_AS(config.finalize(), ConfigError);
  config = {};
  config.stft.hop = 100;
  CHECK_THROWS_AS(config.finalize(), ConfigError);
}
