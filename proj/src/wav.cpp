// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "snre/errors.hpp"

namespace snre {

namespace {

std::uint32_t le_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t le_u16(const unsigned char* b) {
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

}  // namespace

WavFile read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_wav: cannot open " + path);

  unsigned char header[12];
  is.read(reinterpret_cast<char*>(header), 12);
  if (!is || std::memcmp(header, "RIFF", 4) != 0 || std::memcmp(header + 8, "WAVE", 4) != 0) {
    throw FormatError("read_wav: " + path + " is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t audio_format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::vector<unsigned char> data;
  bool have_data = false;

  unsigned char chunk[8];
  while (is.read(reinterpret_cast<char*>(chunk), 8)) {
    const std::uint32_t size = le_u32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      std::vector<unsigned char> fmt(size);
      is.read(reinterpret_cast<char*>(fmt.data()), size);
      if (!is || size < 16) throw FormatError("read_wav: bad fmt chunk in " + path);
      audio_format = le_u16(fmt.data());
      channels = le_u16(fmt.data() + 2);
      sample_rate = le_u32(fmt.data() + 4);
      bits = le_u16(fmt.data() + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data.resize(size);
      is.read(reinterpret_cast<char*>(data.data()), size);
      if (!is) throw FormatError("read_wav: truncated data chunk in " + path);
      have_data = true;
    } else {
      is.seekg(size, std::ios::cur);
    }
    if (size & 1) is.seekg(1, std::ios::cur);  // chunks are word-aligned
  }
  if (!have_fmt || !have_data) {
    throw FormatError("read_wav: missing fmt or data chunk in " + path);
  }
  if (channels != 1) {
    throw FormatError("read_wav: " + path + " has " + std::to_string(channels) +
                      " channels, expected mono");
  }

  WavFile wav;
  wav.sample_rate = static_cast<int>(sample_rate);
  if (audio_format == kFormatPcm && bits == 16) {
    wav.format = WavFormat::kPcm16;
    const std::size_t n = data.size() / 2;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int16_t s =
          static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
      wav.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (audio_format == kFormatFloat && bits == 32) {
    wav.format = WavFormat::kFloat32;
    const std::size_t n = data.size() / 4;
    wav.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t u = le_u32(data.data() + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      wav.samples[i] = static_cast<double>(f);
    }
  } else {
    throw FormatError("read_wav: " + path + " uses format " +
                      std::to_string(audio_format) + "/" + std::to_string(bits) +
                      " bit, expected 16-bit PCM or 32-bit float");
  }
  return wav;
}

void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate, WavFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_wav: cannot open " + path);

  const bool pcm = format == WavFormat::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(samples.size()) * bytes_per_sample;
  // RIFF size: everything after the first 8 bytes.
  const std::uint32_t riff_size = 4 + (8 + 16) + (pcm ? 0 : 8 + 4) + 8 + data_size;

  os.write("RIFF", 4);
  put_u32(os, riff_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put_u32(os, 16);
  put_u16(os, pcm ? kFormatPcm : kFormatFloat);
  put_u16(os, 1);  // mono
  put_u32(os, static_cast<std::uint32_t>(sample_rate));
  put_u32(os, static_cast<std::uint32_t>(sample_rate) * bytes_per_sample);
  put_u16(os, bytes_per_sample);
  put_u16(os, pcm ? 16 : 32);
  if (!pcm) {
    os.write("fact", 4);
    put_u32(os, 4);
    put_u32(os, static_cast<std::uint32_t>(samples.size()));
  }
  os.write("data", 4);
  put_u32(os, data_size);
  if (pcm) {
    for (double v : samples) {
      const long scaled = std::lround(v * 32768.0);
      const std::int16_t s =
          static_cast<std::int16_t>(std::clamp<long>(scaled, -32768, 32767));
      put_u16(os, static_cast<std::uint16_t>(s));
    }
  } else {
    for (double v : samples) {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32(os, u);
    }
  }
  if (!os) throw IoError("write_wav: write failed for " + path);
}

}  // namespace snre
