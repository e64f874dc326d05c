#pragma once

#include <cstddef>
#include <vector>

#include "sic/complex_seq.hpp"
#include "sic/errors.hpp"
#include "sic/fft.hpp"

namespace sic {

struct PsdPoint {
  double frequency_hz;
  double power_density;  // power per Hz
};

// Welch averaged periodogram, Hann window, two-sided baseband ordering
// (ascending frequency from -fs/2). The averaged density is rescaled at the
// end so that sum(density * df) equals the mean power of x exactly.
inline std::vector<PsdPoint> welch_psd(const ComplexSeq& x, std::size_t seg_len, double overlap = 0.5) {
  if (seg_len == 0 || seg_len > x.size())
    throw Error(ErrorKind::argument, "welch_psd: segment length must be in [1, len(x)]");
  if (!(overlap >= 0.0 && overlap < 1.0))
    throw Error(ErrorKind::argument, "welch_psd: overlap must be in [0,1)");

  const std::size_t n = seg_len;
  std::vector<double> window(n);
  double win_pow = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    win_pow += window[i] * window[i];
  }

  std::size_t step = n - static_cast<std::size_t>(overlap * static_cast<double>(n));
  if (step == 0) step = 1;
  const std::size_t n_segs = 1 + (x.size() - n) / step;

  const double fs = x.sample_rate_hz;
  std::vector<double> acc(n, 0.0);
  std::vector<cplx> seg(n);
  for (std::size_t s = 0; s < n_segs; ++s) {
    const std::size_t off = s * step;
    for (std::size_t i = 0; i < n; ++i) seg[i] = x.samples[off + i] * window[i];
    detail::fft_inplace(seg, /*inverse=*/false);
    for (std::size_t i = 0; i < n; ++i) acc[i] += std::norm(seg[i]);
  }
  const double norm = 1.0 / (static_cast<double>(n_segs) * fs * win_pow);
  for (double& v : acc) v *= norm;

  // Parseval pin: windowed-average leakage never cancels exactly, so scale
  // the whole density to integrate to the true mean power.
  const double df = fs / static_cast<double>(n);
  double integral = 0.0;
  for (double v : acc) integral += v * df;
  const double target = mean_power(x);
  const double fix = integral > 0.0 ? target / integral : 1.0;

  std::vector<PsdPoint> out;
  out.reserve(n);
  const std::size_t n_neg = n / 2;  // bins n-n_neg..n-1 are negative frequencies
  for (std::size_t i = n - n_neg; i < n; ++i)
    out.push_back({(static_cast<double>(i) - static_cast<double>(n)) * df, acc[i] * fix});
  for (std::size_t i = 0; i < n - n_neg; ++i)
    out.push_back({static_cast<double>(i) * df, acc[i] * fix});
  return out;
}

}  // namespace sic
