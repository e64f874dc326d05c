#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sic/complex_seq.hpp"
#include "sic/errors.hpp"
#include "sic/fft.hpp"
#include "sic/rng.hpp"

namespace sic {

// QPSK-OFDM numerology. Defaults follow the 802.11n-like 20 MHz channel:
// FFT 64, 52 used subcarriers, CP 16.
struct OfdmConfig {
  std::uint32_t n_subcarriers_total = 64;
  std::uint32_t n_subcarriers_used = 52;
  std::uint32_t cp_len = 16;
  std::uint32_t n_symbols = 250;
  double target_mean_power = 1.0;
  std::uint64_t seed = 0;
  double sample_rate_hz = 20e6;

  std::size_t sequence_length() const {
    return static_cast<std::size_t>(n_symbols) * (n_subcarriers_total + cp_len);
  }

  void validate() const {
    if (n_subcarriers_total == 0) throw Error(ErrorKind::config, "ofdm: FFT size must be positive");
    if (n_subcarriers_used == 0) throw Error(ErrorKind::config, "ofdm: used subcarriers must be positive");
    if (n_subcarriers_used > n_subcarriers_total - 1)
      throw Error(ErrorKind::config, "ofdm: used subcarriers must leave DC free (used <= total-1)");
    if (n_symbols == 0) throw Error(ErrorKind::config, "ofdm: n_symbols must be positive");
    if (!(target_mean_power > 0.0) || !std::isfinite(target_mean_power))
      throw Error(ErrorKind::config, "ofdm: target_mean_power must be positive and finite");
    if (!(sample_rate_hz > 0.0)) throw Error(ErrorKind::config, "ofdm: sample rate must be positive");
  }
};

// FFT-bin indices of the used subcarriers: positive frequencies 1..ceil(u/2),
// negative frequencies wrap to the top bins. DC (bin 0) stays empty.
inline std::vector<std::uint32_t> used_subcarriers(std::uint32_t n_total, std::uint32_t n_used) {
  std::vector<std::uint32_t> idx;
  idx.reserve(n_used);
  const std::uint32_t n_pos = (n_used + 1) / 2;
  const std::uint32_t n_neg = n_used / 2;
  for (std::uint32_t k = 1; k <= n_pos; ++k) idx.push_back(k);
  for (std::uint32_t k = 0; k < n_neg; ++k) idx.push_back(n_total - n_neg + k);
  return idx;
}

// Per OFDM symbol: i.i.d. QPSK points {(+-1 +-j)/sqrt(2)} on the used bins,
// IFFT, cyclic prefix. The full sequence is scaled at the end so its mean
// sample power equals target_mean_power exactly. One RNG draw per QPSK
// symbol, consumed symbol-major in the order of used_subcarriers().
inline ComplexSeq generate_ofdm(const OfdmConfig& cfg) {
  cfg.validate();
  const std::uint32_t nfft = cfg.n_subcarriers_total;
  const auto used = used_subcarriers(nfft, cfg.n_subcarriers_used);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  CounterRng rng(cfg.seed);
  ComplexSeq out;
  out.sample_rate_hz = cfg.sample_rate_hz;
  out.samples.reserve(cfg.sequence_length());

  std::vector<cplx> freq(nfft);
  for (std::uint32_t sym = 0; sym < cfg.n_symbols; ++sym) {
    std::fill(freq.begin(), freq.end(), cplx(0.0, 0.0));
    for (std::uint32_t k : used) {
      const std::uint64_t bits = rng.next_u64();
      freq[k] = cplx((bits & 1) ? inv_sqrt2 : -inv_sqrt2,
                     (bits & 2) ? inv_sqrt2 : -inv_sqrt2);
    }
    detail::fft_inplace(freq, /*inverse=*/true);
    for (std::uint32_t k = nfft - cfg.cp_len; k < nfft; ++k) out.samples.push_back(freq[k]);
    for (std::uint32_t k = 0; k < nfft; ++k) out.samples.push_back(freq[k]);
  }

  const double p = mean_power(out);
  const double scale = std::sqrt(cfg.target_mean_power / p);
  for (cplx& v : out.samples) v *= scale;
  return out;
}

}  // namespace sic
