// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_DFT_HPP
#define SNRE_DFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace snre {

/// Discrete Fourier transform of a fixed size. Forward is unnormalized,
/// inverse carries the 1/n factor. Power-of-two sizes use an iterative
/// radix-2 FFT, other sizes fall back to the direct O(n^2) sum; both paths
/// produce bit-identical zeros in the imaginary parts of bins 0 and n/2
/// for real-valued input (the twiddle table is exact at the quarter points).
class Dft {
 public:
  explicit Dft(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place transforms; buf.size() must equal size().
  void forward(std::vector<std::complex<double>>& buf) const;
  void inverse(std::vector<std::complex<double>>& buf) const;

 private:
  void radix2(std::vector<std::complex<double>>& buf, bool invert) const;
  void direct(std::vector<std::complex<double>>& buf, bool invert) const;

  std::size_t n_;
  bool pow2_;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*k/n)
  std::vector<std::size_t> bitrev_;
};

}  // namespace snre

#endif  // SNRE_DFT_HPP
