#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sic/complex_seq.hpp"
#include "sic/dataset.hpp"
#include "sic/errors.hpp"
#include "sic/rng.hpp"

namespace sic {

// Power-amplifier AM-AM model: F(|s|) = f * arctan(c_f * |s|), phase kept.
struct PaParams {
  double f = 1.0;    // output-power scale
  double c_f = 2.0;  // nonlinearity degree

  void validate() const {
    if (!(f > 0.0) || !std::isfinite(f)) throw Error(ErrorKind::config, "pa: f must be positive and finite");
    if (!(c_f > 0.0) || !std::isfinite(c_f)) throw Error(ErrorKind::config, "pa: c_f must be positive and finite");
  }
};

// LNA gain + A/D magnitude saturation at threshold c_g. The gain is applied
// by gen_wiener before clipping; ad_apply itself only clips.
struct AdParams {
  double c_g = 1.0;    // saturation threshold (may be +inf: no clipping)
  double alpha = 0.9;  // LNA gain

  void validate() const {
    if (!(c_g > 0.0)) throw Error(ErrorKind::config, "ad: c_g must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw Error(ErrorKind::config, "ad: alpha must be positive and finite");
  }
};

inline cplx pa_apply(cplx s, const PaParams& p) {
  const double a = std::abs(s);
  if (a == 0.0) return {0.0, 0.0};  // arg(0) := 0, F(0) = 0
  return s * (p.f * std::atan(p.c_f * a) / a);
}

inline cplx ad_apply(cplx y, const AdParams& p) {
  const double a = std::abs(y);
  if (a < p.c_g) return y;
  return std::polar(p.c_g, std::arg(y));
}

enum class PdpKind { exponential, dirac };

// Tapped-delay-line stand-in for an indoor multipath profile: complex
// Gaussian taps with exponentially decaying power-delay profile. The dirac
// kind puts all energy in tap 0 (dominant line of sight).
struct ChannelProfile {
  PdpKind kind = PdpKind::exponential;
  double rms_delay_spread_s = 30e-9;
  double sample_rate_hz = 20e6;
};

struct SiChannel {
  std::vector<cplx> taps;  // unit energy
  std::uint64_t seed = 0;
  ChannelProfile profile;
};

inline SiChannel make_channel(const ChannelProfile& profile, std::size_t len, std::uint64_t seed) {
  if (len == 0) throw Error(ErrorKind::argument, "make_channel: need at least one tap");
  SiChannel ch;
  ch.seed = seed;
  ch.profile = profile;
  ch.taps.resize(len);
  if (profile.kind == PdpKind::dirac) {
    ch.taps.assign(len, cplx(0.0, 0.0));
    ch.taps[0] = cplx(1.0, 0.0);
    return ch;
  }
  const double dt = 1.0 / profile.sample_rate_hz;
  CounterRng rng(seed);
  double energy = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double p = std::exp(-static_cast<double>(i) * dt / profile.rms_delay_spread_s);
    ch.taps[i] = rng.next_cgaussian(p);
    energy += std::norm(ch.taps[i]);
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (cplx& t : ch.taps) t *= scale;
  return ch;
}

// Causal linear convolution truncated to the input length (zero initial state).
inline ComplexSeq fir_convolve(const ComplexSeq& x, const SiChannel& h) {
  if (x.samples.empty()) throw Error(ErrorKind::argument, "fir_convolve: empty input");
  const std::size_t n = x.size();
  const std::size_t taps = h.taps.size();
  ComplexSeq y;
  y.sample_rate_hz = x.sample_rate_hz;
  y.samples.assign(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < taps; ++i) {
    const cplx c = h.taps[i];
    for (std::size_t k = i; k < n; ++k) y.samples[k] += c * x.samples[k - i];
  }
  return y;
}

struct NoiseSpec {
  double variance = 0.0;  // E|n|^2 per complex sample, split equally re/im
  std::uint64_t seed = 0;

  void validate() const {
    if (!(variance >= 0.0) || !std::isfinite(variance))
      throw Error(ErrorKind::config, "noise: variance must be nonnegative and finite");
  }
};

inline ComplexSeq add_noise(const ComplexSeq& x, const NoiseSpec& n) {
  n.validate();
  ComplexSeq y = x;
  if (n.variance == 0.0) return y;
  CounterRng rng(n.seed);
  for (cplx& v : y.samples) v += rng.next_cgaussian(n.variance);
  return y;
}

// Noise variance giving the requested SI-to-noise ratio against a reference
// SI sequence.
inline double variance_for_snr(const ComplexSeq& si, double snr_db) {
  return mean_power(si) / std::pow(10.0, snr_db / 10.0);
}

// y_H = PA(s) * h + n
inline SiDataset gen_hammerstein(const ComplexSeq& s, const PaParams& pa, const SiChannel& ch,
                                 const NoiseSpec& noise, const SplitSpec& split) {
  pa.validate();
  ComplexSeq amplified;
  amplified.sample_rate_hz = s.sample_rate_hz;
  amplified.samples.reserve(s.size());
  for (const cplx& v : s.samples) amplified.samples.push_back(pa_apply(v, pa));
  ComplexSeq target = add_noise(fir_convolve(amplified, ch), noise);
  return make_dataset(s, std::move(target), split, Provenance::hammerstein);
}

// y_W = AD((z * h + n) * alpha); noise enters before the LNA gain and clip.
inline SiDataset gen_wiener(const ComplexSeq& z, const SiChannel& ch, const AdParams& ad,
                            const NoiseSpec& noise, const SplitSpec& split) {
  ad.validate();
  ComplexSeq v = add_noise(fir_convolve(z, ch), noise);
  for (cplx& s : v.samples) s = ad_apply(s * ad.alpha, ad);
  return make_dataset(z, std::move(v), split, Provenance::wiener);
}

}  // namespace sic
