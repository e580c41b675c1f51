// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <unsupported/Eigen/FFT>
#include <vector>

namespace uno::detail {

using Spectrum = std::vector<std::complex<double>>;

inline Spectrum dft(std::span<const double> x) {
  Eigen::FFT<double> fft;
  std::vector<double> in(x.begin(), x.end());
  Spectrum out;
  fft.fwd(out, in);
  return out;
}

/// Inverse DFT (1/n scaled) of a full spectrum, real part.
inline std::vector<double> idft_real(const Spectrum& spec) {
  Eigen::FFT<double> fft;
  Spectrum out;
  fft.inv(out, spec);
  std::vector<double> re(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
  return re;
}

}  // namespace uno::detail
