#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "sic/complex_seq.hpp"
#include "sic/dataset.hpp"
#include "sic/errors.hpp"

namespace sic {

// ---------------------------------------------------------------------------
// "cs16k v1" sequence file:
//   magic "CSEQ" | u32 version=1 | u64 length | f64 sample_rate_hz
// followed by length interleaved (f32 re, f32 im) pairs. Little-endian.
// ---------------------------------------------------------------------------

namespace detail {

template <typename T>
void put_le(std::ofstream& out, T v) {
  std::array<char, sizeof(T)> buf;
  std::memcpy(buf.data(), &v, sizeof(T));
  out.write(buf.data(), sizeof(T));
}

template <typename T>
bool get_le(std::ifstream& in, T& v) {
  std::array<char, sizeof(T)> buf;
  in.read(buf.data(), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) return false;
  std::memcpy(&v, buf.data(), sizeof(T));
  return true;
}

}  // namespace detail

// All file writes go through a temp-then-rename so readers never observe a
// partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_cs16k(const std::filesystem::path& path, const ComplexSeq& seq) {
  validate_seq(seq, "cs16k write");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + tmp.string());
    out.write("CSEQ", 4);
    detail::put_le<std::uint32_t>(out, 1);
    detail::put_le<std::uint64_t>(out, seq.size());
    detail::put_le<double>(out, seq.sample_rate_hz);
    for (const cplx& v : seq.samples) {
      detail::put_le<float>(out, static_cast<float>(v.real()));
      detail::put_le<float>(out, static_cast<float>(v.imag()));
    }
    if (!out) throw Error(ErrorKind::io, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline ComplexSeq read_cs16k(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "CSEQ", 4) != 0)
    throw Error(ErrorKind::format, "bad magic in " + path.string());
  std::uint32_t version = 0;
  std::uint64_t length = 0;
  double rate = 0.0;
  if (!detail::get_le(in, version) || !detail::get_le(in, length) || !detail::get_le(in, rate))
    throw Error(ErrorKind::format, "truncated header in " + path.string());
  if (version != 1)
    throw Error(ErrorKind::format, "unsupported cs16k version " + std::to_string(version));
  if (length == 0) throw Error(ErrorKind::format, "zero-length sequence in " + path.string());

  ComplexSeq seq;
  seq.sample_rate_hz = rate;
  seq.samples.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    float re = 0.0f, im = 0.0f;
    if (!detail::get_le(in, re) || !detail::get_le(in, im))
      throw Error(ErrorKind::format, "truncated payload in " + path.string() + " (sample " +
                                         std::to_string(i) + " of " + std::to_string(length) + ")");
    seq.samples.emplace_back(static_cast<double>(re), static_cast<double>(im));
  }
  if (!(seq.sample_rate_hz > 0.0))
    throw Error(ErrorKind::format, "non-positive sample rate in " + path.string());
  if (!all_finite(seq.samples))
    throw Error(ErrorKind::non_finite, "non-finite samples in " + path.string());
  return seq;
}

// Raw interleaved (f32 re, f32 im) with no header; the sample rate comes from
// sidecar metadata.
inline ComplexSeq read_raw_f32(const std::filesystem::path& path, double sample_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open: " + path.string());
  ComplexSeq seq;
  seq.sample_rate_hz = sample_rate_hz;
  for (;;) {
    float re = 0.0f, im = 0.0f;
    if (!detail::get_le(in, re)) break;
    if (!detail::get_le(in, im))
      throw Error(ErrorKind::format, "odd float count in " + path.string());
    seq.samples.emplace_back(static_cast<double>(re), static_cast<double>(im));
  }
  if (seq.samples.empty()) throw Error(ErrorKind::format, "empty recording " + path.string());
  if (!all_finite(seq.samples))
    throw Error(ErrorKind::non_finite, "non-finite samples in " + path.string());
  return seq;
}

// ---------------------------------------------------------------------------
// Dataset on disk: <base>.input.cs16k, <base>.target.cs16k, <base>.json
// ---------------------------------------------------------------------------

inline void save_dataset(const std::filesystem::path& base, const SiDataset& ds,
                         const nlohmann::json& extra = nlohmann::json::object()) {
  validate_dataset(ds);
  write_cs16k(base.string() + ".input.cs16k", ds.input);
  write_cs16k(base.string() + ".target.cs16k", ds.target);
  nlohmann::json side = {
      {"provenance", to_string(ds.provenance)},
      {"split", {{"train", {ds.split_train.begin, ds.split_train.end}},
                 {"test", {ds.split_test.begin, ds.split_test.end}}}},
  };
  if (!extra.empty()) side["meta"] = extra;
  atomic_write_text(base.string() + ".json", side.dump(2) + "\n");
}

inline SiDataset load_dataset(const std::filesystem::path& base) {
  std::ifstream side_in(base.string() + ".json");
  if (!side_in) throw Error(ErrorKind::io, "cannot open sidecar: " + base.string() + ".json");
  nlohmann::json side;
  try {
    side_in >> side;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("bad sidecar JSON: ") + e.what());
  }
  SiDataset ds;
  ds.input = read_cs16k(base.string() + ".input.cs16k");
  ds.target = read_cs16k(base.string() + ".target.cs16k");
  if (ds.input.size() != ds.target.size())
    throw Error(ErrorKind::length_mismatch,
                "input length " + std::to_string(ds.input.size()) + " != target length " +
                    std::to_string(ds.target.size()));
  try {
    ds.provenance = provenance_from_string(side.at("provenance").get<std::string>());
    const auto& tr = side.at("split").at("train");
    const auto& te = side.at("split").at("test");
    ds.split_train = {tr.at(0).get<std::size_t>(), tr.at(1).get<std::size_t>()};
    ds.split_test = {te.at(0).get<std::size_t>(), te.at(1).get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("bad sidecar fields: ") + e.what());
  }
  validate_dataset(ds);
  return ds;
}

enum class RecordingFormat { cs16k, raw_f32 };

// Externally recorded input/target pair -> dataset with provenance=recorded.
// raw_f32 requires a JSON sidecar next to the input file carrying
// {"sample_rate_hz": ...}.
inline SiDataset load_recording(const std::filesystem::path& input_path,
                                const std::filesystem::path& target_path, RecordingFormat format,
                                const SplitSpec& split = {}) {
  ComplexSeq input, target;
  if (format == RecordingFormat::cs16k) {
    input = read_cs16k(input_path);
    target = read_cs16k(target_path);
  } else {
    const std::filesystem::path meta_path = input_path.string() + ".json";
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw Error(ErrorKind::io, "cannot open recording sidecar: " + meta_path.string());
    nlohmann::json meta;
    try {
      meta_in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::format, std::string("bad recording sidecar: ") + e.what());
    }
    if (!meta.contains("sample_rate_hz"))
      throw Error(ErrorKind::format, "recording sidecar lacks sample_rate_hz");
    const double rate = meta["sample_rate_hz"].get<double>();
    input = read_raw_f32(input_path, rate);
    target = read_raw_f32(target_path, rate);
  }
  if (input.size() != target.size())
    throw Error(ErrorKind::length_mismatch,
                "recording input length " + std::to_string(input.size()) + " != target length " +
                    std::to_string(target.size()));
  return make_dataset(std::move(input), std::move(target), split, Provenance::recorded);
}

}  // namespace sic
