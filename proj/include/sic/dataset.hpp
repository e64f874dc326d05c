#pragma once

#include <cstddef>
#include <string>

#include "sic/complex_seq.hpp"
#include "sic/errors.hpp"

namespace sic {

enum class Provenance { hammerstein, wiener, recorded };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::hammerstein: return "hammerstein";
    case Provenance::wiener: return "wiener";
    case Provenance::recorded: return "recorded";
  }
  return "unknown";
}

inline Provenance provenance_from_string(const std::string& s) {
  if (s == "hammerstein") return Provenance::hammerstein;
  if (s == "wiener") return Provenance::wiener;
  if (s == "recorded") return Provenance::recorded;
  throw Error(ErrorKind::format, "unknown provenance '" + s + "'");
}

// Half-open [begin, end) index range.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - begin; }
};

struct SplitSpec {
  double test_fraction = 0.1;

  void validate() const {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0))
      throw Error(ErrorKind::config, "split: test_fraction must be in [0,1)");
  }
};

// Paired (model input, SI target) with a contiguous train/test split:
// train is the leading (1 - test_fraction) share, test the remainder.
struct SiDataset {
  ComplexSeq input;
  ComplexSeq target;
  IndexRange split_train;
  IndexRange split_test;
  Provenance provenance = Provenance::hammerstein;
};

inline void validate_dataset(const SiDataset& ds) {
  validate_seq(ds.input, "dataset input");
  validate_seq(ds.target, "dataset target");
  if (ds.input.size() != ds.target.size())
    throw Error(ErrorKind::length_mismatch, "dataset input/target lengths differ");
  const std::size_t n = ds.input.size();
  if (ds.split_train.begin != 0 || ds.split_train.end != ds.split_test.begin || ds.split_test.end != n)
    throw Error(ErrorKind::argument, "dataset split ranges must be disjoint and cover the sequence");
}

inline SiDataset make_dataset(ComplexSeq input, ComplexSeq target, const SplitSpec& split, Provenance prov) {
  split.validate();
  SiDataset ds;
  ds.input = std::move(input);
  ds.target = std::move(target);
  ds.provenance = prov;
  const std::size_t n = ds.input.size();
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - split.test_fraction)));
  ds.split_train = {0, n_train};
  ds.split_test = {n_train, n};
  validate_dataset(ds);
  return ds;
}

// Round samples through f32 pairs, matching the on-disk "cs16k v1" payload.
// Datasets that pass through here compare bit-equal with their cached copies.
inline ComplexSeq quantize_f32(const ComplexSeq& x) {
  ComplexSeq out;
  out.sample_rate_hz = x.sample_rate_hz;
  out.samples.reserve(x.size());
  for (const cplx& v : x.samples)
    out.samples.emplace_back(static_cast<double>(static_cast<float>(v.real())),
                             static_cast<double>(static_cast<float>(v.imag())));
  return out;
}

}  // namespace sic
