#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sic/errors.hpp"

namespace sic {

using cplx = std::complex<double>;

// A finite complex baseband sequence plus its sample rate. The carrier type
// for every signal in the library.
struct ComplexSeq {
  std::vector<cplx> samples;
  double sample_rate_hz = 20e6;

  std::size_t size() const { return samples.size(); }
};

inline double mean_power(std::span<const cplx> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  return acc / static_cast<double>(x.size());
}

inline double mean_power(const ComplexSeq& x) { return mean_power(std::span<const cplx>(x.samples)); }

inline bool all_finite(std::span<const cplx> x) {
  for (const cplx& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

inline void validate_seq(const ComplexSeq& x, const char* what) {
  if (x.samples.empty())
    throw Error(ErrorKind::argument, std::string(what) + ": empty sequence");
  if (!(x.sample_rate_hz > 0.0))
    throw Error(ErrorKind::argument, std::string(what) + ": sample rate must be positive");
  if (!all_finite(x.samples))
    throw Error(ErrorKind::non_finite, std::string(what) + ": sequence contains NaN/Inf");
}

}  // namespace sic
