// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/dft.hpp"

#include <cmath>
#include <utility>

#include "snre/errors.hpp"

namespace snre {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Dft::Dft(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n_ == 0) throw ConfigError("Dft: size must be positive");
  twiddle_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    // Exact values at the quarter points keep DC/Nyquist bins of real
    // signals exactly real.
    if (k == 0) {
      twiddle_[k] = {1.0, 0.0};
    } else if (4 * k == n_) {
      twiddle_[k] = {0.0, -1.0};
    } else if (2 * k == n_) {
      twiddle_[k] = {-1.0, 0.0};
    } else if (4 * k == 3 * n_) {
      twiddle_[k] = {0.0, 1.0};
    } else {
      const double arg = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_);
      twiddle_[k] = {std::cos(arg), std::sin(arg)};
    }
  }
  if (pow2_) {
    bitrev_.resize(n_);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n_) ++bits;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bitrev_[i] = r;
    }
  }
}

void Dft::forward(std::vector<std::complex<double>>& buf) const {
  if (buf.size() != n_) throw ShapeError("Dft::forward: buffer size mismatch");
  if (pow2_) {
    radix2(buf, false);
  } else {
    direct(buf, false);
  }
}

void Dft::inverse(std::vector<std::complex<double>>& buf) const {
  if (buf.size() != n_) throw ShapeError("Dft::inverse: buffer size mismatch");
  if (pow2_) {
    radix2(buf, true);
  } else {
    direct(buf, true);
  }
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : buf) v *= scale;
}

void Dft::radix2(std::vector<std::complex<double>>& buf, bool invert) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(buf[i], buf[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddle_[j * stride];
        if (invert) w = std::conj(w);
        const std::complex<double> odd = buf[start + j + half] * w;
        const std::complex<double> even = buf[start + j];
        buf[start + j] = even + odd;
        buf[start + j + half] = even - odd;
      }
    }
  }
}

void Dft::direct(std::vector<std::complex<double>>& buf, bool invert) const {
  std::vector<std::complex<double>> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < n_; ++j) {
      std::complex<double> w = twiddle_[(j * k) % n_];
      if (invert) w = std::conj(w);
      acc += buf[j] * w;
    }
    out[k] = acc;
  }
  buf.swap(out);
}

}  // namespace snre
