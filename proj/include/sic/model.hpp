#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sic/complex_seq.hpp"
#include "sic/errors.hpp"
#include "sic/rng.hpp"

namespace sic {

enum class ModelKind { linear, hammerstein, wiener, wiener_hammerstein, ffnn };
enum class Activation { tanh, relu };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::linear: return "linear";
    case ModelKind::hammerstein: return "hammerstein";
    case ModelKind::wiener: return "wiener";
    case ModelKind::wiener_hammerstein: return "wiener_hammerstein";
    case ModelKind::ffnn: return "ffnn";
  }
  return "unknown";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "linear") return ModelKind::linear;
  if (s == "hammerstein") return ModelKind::hammerstein;
  if (s == "wiener") return ModelKind::wiener;
  if (s == "wiener_hammerstein") return ModelKind::wiener_hammerstein;
  if (s == "ffnn") return ModelKind::ffnn;
  throw Error(ErrorKind::format, "unknown model kind '" + s + "'");
}

inline const char* to_string(Activation a) { return a == Activation::tanh ? "tanh" : "relu"; }

inline Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::tanh;
  if (s == "relu") return Activation::relu;
  throw Error(ErrorKind::format, "unknown activation '" + s + "'");
}

// Scalar real MLP applied to sample magnitudes, phase passed through
// untouched: out = M(|x|) * exp(j*arg(x)). One hidden layer, linear single
// output unit. Bias flags are per layer; the Table-I parameter budgets need
// all three combinations (none, hidden-only, both).
struct MagnitudeMlpSpec {
  std::uint32_t hidden_width = 8;
  Activation activation = Activation::tanh;
  bool hidden_bias = false;
  bool output_bias = false;

  std::size_t param_count() const {
    return 2 * static_cast<std::size_t>(hidden_width) + (hidden_bias ? hidden_width : 0) +
           (output_bias ? 1 : 0);
  }
};

struct ModelArch {
  ModelKind kind = ModelKind::linear;
  std::uint32_t context_len = 13;
  std::optional<MagnitudeMlpSpec> mlp_pre;   // Hammerstein side (before the FIR)
  std::optional<MagnitudeMlpSpec> mlp_post;  // Wiener side (after the FIR)
  std::vector<std::uint32_t> ffnn_hidden;

  void validate() const {
    if (context_len == 0) throw Error(ErrorKind::config, "arch: context_len must be positive");
    switch (kind) {
      case ModelKind::linear:
        if (mlp_pre || mlp_post) throw Error(ErrorKind::config, "linear arch must not carry MLPs");
        break;
      case ModelKind::hammerstein:
        if (!mlp_pre || mlp_post) throw Error(ErrorKind::config, "hammerstein arch needs mlp_pre only");
        break;
      case ModelKind::wiener:
        if (mlp_pre || !mlp_post) throw Error(ErrorKind::config, "wiener arch needs mlp_post only");
        break;
      case ModelKind::wiener_hammerstein:
        if (!mlp_pre || !mlp_post)
          throw Error(ErrorKind::config, "wiener_hammerstein arch needs both MLPs");
        break;
      case ModelKind::ffnn:
        if (ffnn_hidden.empty()) throw Error(ErrorKind::config, "ffnn arch needs hidden layer sizes");
        if (mlp_pre || mlp_post) throw Error(ErrorKind::config, "ffnn arch must not carry magnitude MLPs");
        break;
    }
    if (kind != ModelKind::ffnn && !ffnn_hidden.empty())
      throw Error(ErrorKind::config, "ffnn_hidden only applies to the ffnn arch");
    for (auto h : ffnn_hidden)
      if (h == 0) throw Error(ErrorKind::config, "ffnn hidden widths must be positive");
    if (mlp_pre && mlp_pre->hidden_width == 0)
      throw Error(ErrorKind::config, "mlp_pre hidden width must be positive");
    if (mlp_post && mlp_post->hidden_width == 0)
      throw Error(ErrorKind::config, "mlp_post hidden width must be positive");
  }
};

// Table-I configurations: tanh MLP without biases on the Hammerstein side,
// ReLU MLP on the Wiener side (full biases standalone, hidden-only inside
// the Wiener-Hammerstein cascade), FFNN with one 17-unit hidden layer.
inline ModelArch make_arch(ModelKind kind, std::uint32_t context_len = 13, std::uint32_t mlp_hidden = 8,
                           std::vector<std::uint32_t> ffnn_hidden = {17}) {
  ModelArch arch;
  arch.kind = kind;
  arch.context_len = context_len;
  switch (kind) {
    case ModelKind::linear:
      break;
    case ModelKind::hammerstein:
      arch.mlp_pre = MagnitudeMlpSpec{mlp_hidden, Activation::tanh, false, false};
      break;
    case ModelKind::wiener:
      arch.mlp_post = MagnitudeMlpSpec{mlp_hidden, Activation::relu, true, true};
      break;
    case ModelKind::wiener_hammerstein:
      arch.mlp_pre = MagnitudeMlpSpec{mlp_hidden, Activation::tanh, false, false};
      arch.mlp_post = MagnitudeMlpSpec{mlp_hidden, Activation::relu, true, false};
      break;
    case ModelKind::ffnn:
      arch.ffnn_hidden = std::move(ffnn_hidden);
      break;
  }
  arch.validate();
  return arch;
}

// ---------------------------------------------------------------------------
// Flat real parameter storage with a segment map back to layers. Complex FIR
// taps live as interleaved (re, im) pairs.
// ---------------------------------------------------------------------------

struct ParamSegment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::array<std::size_t, 2> shape{0, 0};
  bool complex_pairs = false;
};

struct ParamVector {
  std::vector<double> values;
  std::vector<ParamSegment> layout;

  std::span<double> segment(std::string_view name) {
    for (const auto& s : layout)
      if (s.name == name) return {values.data() + s.offset, s.length};
    throw Error(ErrorKind::structure, "no parameter segment named '" + std::string(name) + "'");
  }
  std::span<const double> segment(std::string_view name) const {
    for (const auto& s : layout)
      if (s.name == name) return {values.data() + s.offset, s.length};
    throw Error(ErrorKind::structure, "no parameter segment named '" + std::string(name) + "'");
  }
};

namespace detail {

struct MlpOffsets {
  std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0;
  MagnitudeMlpSpec spec;
};

struct FfnnLayer {
  std::size_t w = 0, b = 0;
  std::size_t fan_in = 0, fan_out = 0;
};

struct ArchOffsets {
  std::optional<MlpOffsets> pre, post;
  std::size_t fir = 0;
  std::size_t fir_taps = 0;  // 0 when the arch has no FIR stage
  std::vector<FfnnLayer> ffnn;
  std::size_t total = 0;
};

inline std::size_t place_mlp(MlpOffsets& m, const MagnitudeMlpSpec& spec, std::size_t at) {
  m.spec = spec;
  const std::size_t h = spec.hidden_width;
  m.w1 = at;
  at += h;
  if (spec.hidden_bias) {
    m.b1 = at;
    at += h;
  }
  m.w2 = at;
  at += h;
  if (spec.output_bias) {
    m.b2 = at;
    at += 1;
  }
  return at;
}

inline ArchOffsets arch_offsets(const ModelArch& arch) {
  arch.validate();
  ArchOffsets off;
  std::size_t at = 0;
  if (arch.mlp_pre) {
    off.pre.emplace();
    at = place_mlp(*off.pre, *arch.mlp_pre, at);
  }
  if (arch.kind == ModelKind::ffnn) {
    std::size_t fan_in = 2 * static_cast<std::size_t>(arch.context_len);
    for (std::size_t l = 0; l <= arch.ffnn_hidden.size(); ++l) {
      const std::size_t fan_out = l < arch.ffnn_hidden.size() ? arch.ffnn_hidden[l] : 2;
      FfnnLayer layer;
      layer.fan_in = fan_in;
      layer.fan_out = fan_out;
      layer.w = at;
      at += fan_in * fan_out;
      layer.b = at;
      at += fan_out;
      off.ffnn.push_back(layer);
      fan_in = fan_out;
    }
  } else {
    off.fir = at;
    off.fir_taps = arch.context_len;
    at += 2 * static_cast<std::size_t>(arch.context_len);
  }
  if (arch.mlp_post) {
    off.post.emplace();
    at = place_mlp(*off.post, *arch.mlp_post, at);
  }
  off.total = at;
  return off;
}

}  // namespace detail

inline std::vector<ParamSegment> build_layout(const ModelArch& arch) {
  const auto off = detail::arch_offsets(arch);
  std::vector<ParamSegment> layout;
  auto add_mlp = [&](const detail::MlpOffsets& m, const std::string& prefix) {
    const std::size_t h = m.spec.hidden_width;
    layout.push_back({prefix + ".w1", m.w1, h, {h, 1}, false});
    if (m.spec.hidden_bias) layout.push_back({prefix + ".b1", m.b1, h, {h, 1}, false});
    layout.push_back({prefix + ".w2", m.w2, h, {1, h}, false});
    if (m.spec.output_bias) layout.push_back({prefix + ".b2", m.b2, 1, {1, 1}, false});
  };
  if (off.pre) add_mlp(*off.pre, "mlp_pre");
  if (off.fir_taps > 0)
    layout.push_back({"fir", off.fir, 2 * off.fir_taps, {off.fir_taps, 2}, true});
  for (std::size_t l = 0; l < off.ffnn.size(); ++l) {
    const auto& layer = off.ffnn[l];
    layout.push_back({"ffnn.w" + std::to_string(l + 1), layer.w, layer.fan_in * layer.fan_out,
                      {layer.fan_out, layer.fan_in}, false});
    layout.push_back({"ffnn.b" + std::to_string(l + 1), layer.b, layer.fan_out, {layer.fan_out, 1}, false});
  }
  if (off.post) add_mlp(*off.post, "mlp_post");
  return layout;
}

inline std::size_t count_params(const ModelArch& arch) { return detail::arch_offsets(arch).total; }

// Compute-cost proxy: one MAC per real parameter per output sample, in GMAC.
inline double count_macs(const ModelArch& arch, std::uint64_t n_samples) {
  return static_cast<double>(count_params(arch)) * static_cast<double>(n_samples) * 1e-9;
}

inline ParamVector zero_params_like(const ModelArch& arch) {
  ParamVector p;
  p.layout = build_layout(arch);
  p.values.assign(count_params(arch), 0.0);
  return p;
}

// Deterministic init: FIR = unit impulse plus complex Gaussian noise of
// per-component scale 1e-2; MLP/FFNN weights uniform in +-sqrt(1/fan_in);
// biases zero. Draw order follows the layout.
inline ParamVector init_params(const ModelArch& arch, std::uint64_t seed) {
  const auto off = detail::arch_offsets(arch);
  ParamVector p = zero_params_like(arch);
  CounterRng rng(seed);
  auto init_mlp = [&](const detail::MlpOffsets& m) {
    const std::size_t h = m.spec.hidden_width;
    for (std::size_t i = 0; i < h; ++i) p.values[m.w1 + i] = rng.next_uniform(-1.0, 1.0);
    const double s2 = std::sqrt(1.0 / static_cast<double>(h));
    for (std::size_t i = 0; i < h; ++i) p.values[m.w2 + i] = rng.next_uniform(-s2, s2);
  };
  if (off.pre) init_mlp(*off.pre);
  if (off.fir_taps > 0) {
    for (std::size_t i = 0; i < off.fir_taps; ++i) {
      double g1, g2;
      rng.next_gaussian_pair(g1, g2);
      p.values[off.fir + 2 * i] = (i == 0 ? 1.0 : 0.0) + 1e-2 * g1;
      p.values[off.fir + 2 * i + 1] = 1e-2 * g2;
    }
  }
  for (const auto& layer : off.ffnn) {
    const double s = std::sqrt(1.0 / static_cast<double>(layer.fan_in));
    for (std::size_t i = 0; i < layer.fan_in * layer.fan_out; ++i)
      p.values[layer.w + i] = rng.next_uniform(-s, s);
  }
  if (off.post) init_mlp(*off.post);
  return p;
}

// ---------------------------------------------------------------------------
// Forward / backward engine
// ---------------------------------------------------------------------------

namespace detail {

inline double activate(double z, Activation act) {
  return act == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative from the activated value (enough for both tanh and relu).
inline double activate_deriv(double h, Activation act) {
  return act == Activation::tanh ? 1.0 - h * h : (h > 0.0 ? 1.0 : 0.0);
}

struct MlpStageCache {
  std::vector<double> mag;     // |x|
  std::vector<cplx> phase;     // x/|x|, 1 at x=0
  std::vector<double> hidden;  // N x hidden activations
  std::vector<double> out;     // scalar MLP outputs M(|x|)
};

inline void mlp_stage_forward(std::span<const cplx> x, const MlpOffsets& m,
                              std::span<const double> theta, MlpStageCache& cache,
                              std::span<cplx> out) {
  const std::size_t n = x.size();
  const std::size_t h = m.spec.hidden_width;
  const Activation act = m.spec.activation;
  cache.mag.resize(n);
  cache.phase.resize(n);
  cache.hidden.resize(n * h);
  cache.out.resize(n);
  const double* w1 = theta.data() + m.w1;
  const double* b1 = m.spec.hidden_bias ? theta.data() + m.b1 : nullptr;
  const double* w2 = theta.data() + m.w2;
  const double b2 = m.spec.output_bias ? theta[m.b2] : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(x[k]);
    cache.mag[k] = a;
    cache.phase[k] = a > 0.0 ? x[k] / a : cplx(1.0, 0.0);
    double* hk = cache.hidden.data() + k * h;
    double acc = b2;
    for (std::size_t j = 0; j < h; ++j) {
      const double z = w1[j] * a + (b1 ? b1[j] : 0.0);
      hk[j] = activate(z, act);
      acc += w2[j] * hk[j];
    }
    cache.out[k] = acc;
    out[k] = acc * cache.phase[k];
  }
}

// Accumulates parameter gradients into grad[theta-layout]; writes the input
// gradient when gx is non-empty. |x| uses subgradient 0 at x = 0.
inline void mlp_stage_backward(std::span<const cplx> g, const MlpOffsets& m,
                               std::span<const double> theta, const MlpStageCache& cache,
                               std::span<double> grad, std::span<cplx> gx) {
  const std::size_t n = g.size();
  const std::size_t h = m.spec.hidden_width;
  const Activation act = m.spec.activation;
  const double* w1 = theta.data() + m.w1;
  const double* w2 = theta.data() + m.w2;
  double* dw1 = grad.data() + m.w1;
  double* db1 = m.spec.hidden_bias ? grad.data() + m.b1 : nullptr;
  double* dw2 = grad.data() + m.w2;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx gp = g[k] * std::conj(cache.phase[k]);
    const double u_rad = gp.real();
    const double a = cache.mag[k];
    const double* hk = cache.hidden.data() + k * h;
    double dm_da = 0.0;
    for (std::size_t j = 0; j < h; ++j) {
      dw2[j] += u_rad * hk[j];
      const double delta = u_rad * w2[j] * activate_deriv(hk[j], act);
      dw1[j] += delta * a;
      if (db1) db1[j] += delta;
      dm_da += delta * w1[j];
    }
    if (m.spec.output_bias) grad[m.b2] += u_rad;
    if (!gx.empty()) {
      if (a > 0.0) {
        const double u_tan = gp.imag();
        gx[k] = cache.phase[k] * cplx(dm_da, cache.out[k] / a * u_tan);
      } else {
        gx[k] = cplx(0.0, 0.0);
      }
    }
  }
}

inline void fir_forward(std::span<const cplx> x, std::span<const cplx> taps, std::span<cplx> out) {
  const std::size_t n = x.size();
  std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const cplx c = taps[i];
    for (std::size_t k = i; k < n; ++k) out[k] += c * x[k - i];
  }
}

// dtap_i = sum_k g[k] * conj(x[k-i]); gx[m] = sum_i conj(c_i) * g[m+i].
inline void fir_backward(std::span<const cplx> g, std::span<const cplx> x, std::span<const cplx> taps,
                         std::span<cplx> dtaps, std::span<cplx> gx) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < taps.size(); ++i) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = i; k < n; ++k) acc += g[k] * std::conj(x[k - i]);
    dtaps[i] += acc;
  }
  if (!gx.empty()) {
    std::fill(gx.begin(), gx.end(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < taps.size(); ++i) {
      const cplx cc = std::conj(taps[i]);
      for (std::size_t k = i; k < n; ++k) gx[k - i] += cc * g[k];
    }
  }
}

struct FfnnCache {
  // Activations per layer (layer output), N x fan_out each; the final layer
  // is linear so only hidden layers are stored.
  std::vector<std::vector<double>> hidden;
};

inline void ffnn_forward(std::span<const cplx> x, const ModelArch& arch, const ArchOffsets& off,
                         std::span<const double> theta, FfnnCache& cache, std::span<cplx> out) {
  const std::size_t n = x.size();
  const std::size_t ctx = arch.context_len;
  const std::size_t n_layers = off.ffnn.size();
  cache.hidden.resize(n_layers - 1);
  for (std::size_t l = 0; l + 1 < n_layers; ++l) cache.hidden[l].resize(n * off.ffnn[l].fan_out);
  std::vector<double> win(2 * ctx);
  std::vector<double> buf_in, buf_out;
  for (std::size_t k = 0; k < n; ++k) {
    // window [x[k], x[k-1], ...] as interleaved (re, im), newest first
    for (std::size_t i = 0; i < ctx; ++i) {
      if (k >= i) {
        win[2 * i] = x[k - i].real();
        win[2 * i + 1] = x[k - i].imag();
      } else {
        win[2 * i] = 0.0;
        win[2 * i + 1] = 0.0;
      }
    }
    const double* in = win.data();
    std::size_t in_len = 2 * ctx;
    for (std::size_t l = 0; l < n_layers; ++l) {
      const auto& layer = off.ffnn[l];
      const bool last = l + 1 == n_layers;
      double* dst;
      if (last) {
        buf_out.resize(layer.fan_out);
        dst = buf_out.data();
      } else {
        dst = cache.hidden[l].data() + k * layer.fan_out;
      }
      const double* w = theta.data() + layer.w;
      const double* b = theta.data() + layer.b;
      for (std::size_t o = 0; o < layer.fan_out; ++o) {
        double acc = b[o];
        const double* wrow = w + o * in_len;
        for (std::size_t i = 0; i < in_len; ++i) acc += wrow[i] * in[i];
        dst[o] = last ? acc : (acc > 0.0 ? acc : 0.0);
      }
      in = dst;
      in_len = layer.fan_out;
    }
    out[k] = cplx(buf_out[0], buf_out[1]);
  }
}

inline void ffnn_backward(std::span<const cplx> g, std::span<const cplx> x, const ModelArch& arch,
                          const ArchOffsets& off, std::span<const double> theta,
                          const FfnnCache& cache, std::span<double> grad) {
  const std::size_t n = x.size();
  const std::size_t ctx = arch.context_len;
  const std::size_t n_layers = off.ffnn.size();
  std::vector<double> win(2 * ctx);
  std::vector<double> delta_hi, delta_lo;
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k] == cplx(0.0, 0.0)) continue;
    for (std::size_t i = 0; i < ctx; ++i) {
      if (k >= i) {
        win[2 * i] = x[k - i].real();
        win[2 * i + 1] = x[k - i].imag();
      } else {
        win[2 * i] = 0.0;
        win[2 * i + 1] = 0.0;
      }
    }
    delta_hi.assign({g[k].real(), g[k].imag()});
    for (std::size_t l = n_layers; l-- > 0;) {
      const auto& layer = off.ffnn[l];
      const double* in = l == 0 ? win.data() : cache.hidden[l - 1].data() + k * layer.fan_in;
      double* dw = grad.data() + layer.w;
      double* db = grad.data() + layer.b;
      for (std::size_t o = 0; o < layer.fan_out; ++o) {
        const double d = delta_hi[o];
        if (d == 0.0) continue;
        double* dwrow = dw + o * layer.fan_in;
        for (std::size_t i = 0; i < layer.fan_in; ++i) dwrow[i] += d * in[i];
        db[o] += d;
      }
      if (l == 0) break;
      // delta for the layer below, gated by its relu
      delta_lo.assign(layer.fan_in, 0.0);
      const double* w = theta.data() + layer.w;
      for (std::size_t o = 0; o < layer.fan_out; ++o) {
        const double d = delta_hi[o];
        if (d == 0.0) continue;
        const double* wrow = w + o * layer.fan_in;
        for (std::size_t i = 0; i < layer.fan_in; ++i) delta_lo[i] += d * wrow[i];
      }
      for (std::size_t i = 0; i < layer.fan_in; ++i)
        if (in[i] <= 0.0) delta_lo[i] = 0.0;
      std::swap(delta_hi, delta_lo);
    }
  }
}

// Reusable buffers so training epochs allocate nothing.
struct Workspace {
  std::vector<cplx> stage1;  // after mlp_pre (hammerstein/WH)
  std::vector<cplx> stage2;  // after FIR
  std::vector<cplx> gx1, gx2;
  std::vector<cplx> taps, dtaps;
  MlpStageCache pre_cache, post_cache;
  FfnnCache ffnn_cache;
  std::vector<cplx> out;
};

inline void check_params(const ModelArch& arch, const ParamVector& params, const ArchOffsets& off) {
  if (params.values.size() != off.total)
    throw Error(ErrorKind::structure,
                "parameter vector length " + std::to_string(params.values.size()) +
                    " does not match arch layout (" + std::to_string(off.total) + ")");
}

inline void forward_ws(const ModelArch& arch, const ArchOffsets& off, std::span<const double> theta,
                       std::span<const cplx> x, Workspace& ws) {
  const std::size_t n = x.size();
  ws.out.resize(n);
  if (arch.kind == ModelKind::ffnn) {
    ffnn_forward(x, arch, off, theta, ws.ffnn_cache, ws.out);
    return;
  }
  ws.taps.resize(off.fir_taps);
  for (std::size_t i = 0; i < off.fir_taps; ++i)
    ws.taps[i] = cplx(theta[off.fir + 2 * i], theta[off.fir + 2 * i + 1]);

  std::span<const cplx> cur = x;
  if (off.pre) {
    ws.stage1.resize(n);
    mlp_stage_forward(cur, *off.pre, theta, ws.pre_cache, ws.stage1);
    cur = ws.stage1;
  }
  if (off.post) {
    ws.stage2.resize(n);
    fir_forward(cur, ws.taps, ws.stage2);
    mlp_stage_forward(ws.stage2, *off.post, theta, ws.post_cache, ws.out);
  } else {
    fir_forward(cur, ws.taps, ws.out);
  }
}

inline void backward_ws(const ModelArch& arch, const ArchOffsets& off, std::span<const double> theta,
                        std::span<const cplx> x, std::span<const cplx> g, Workspace& ws,
                        std::span<double> grad) {
  const std::size_t n = x.size();
  std::fill(grad.begin(), grad.end(), 0.0);
  if (arch.kind == ModelKind::ffnn) {
    ffnn_backward(g, x, arch, off, theta, ws.ffnn_cache, grad);
    return;
  }
  std::span<const cplx> cur_g = g;
  if (off.post) {
    ws.gx2.resize(n);
    mlp_stage_backward(cur_g, *off.post, theta, ws.post_cache, grad, ws.gx2);
    cur_g = ws.gx2;
  }
  ws.dtaps.assign(off.fir_taps, cplx(0.0, 0.0));
  std::span<const cplx> fir_in = off.pre ? std::span<const cplx>(ws.stage1) : x;
  if (off.pre) {
    ws.gx1.resize(n);
    fir_backward(cur_g, fir_in, ws.taps, ws.dtaps, ws.gx1);
    mlp_stage_backward(ws.gx1, *off.pre, theta, ws.pre_cache, grad, {});
  } else {
    fir_backward(cur_g, fir_in, ws.taps, ws.dtaps, {});
  }
  for (std::size_t i = 0; i < off.fir_taps; ++i) {
    grad[off.fir + 2 * i] += ws.dtaps[i].real();
    grad[off.fir + 2 * i + 1] += ws.dtaps[i].imag();
  }
}

}  // namespace detail

// Per-sample magnitude MLP, params = [w1, (b1), w2, (b2)].
inline cplx mlp_forward(cplx x, const MagnitudeMlpSpec& spec, std::span<const double> params) {
  if (params.size() != spec.param_count())
    throw Error(ErrorKind::structure, "mlp_forward: parameter block size mismatch");
  detail::MlpOffsets m;
  detail::place_mlp(m, spec, 0);
  detail::MlpStageCache cache;
  cplx out;
  detail::mlp_stage_forward(std::span<const cplx>(&x, 1), m, params, cache, std::span<cplx>(&out, 1));
  return out;
}

// Causal same-length forward pass of any of the five architectures.
inline ComplexSeq forward(const ModelArch& arch, const ParamVector& params, const ComplexSeq& input) {
  const auto off = detail::arch_offsets(arch);
  detail::check_params(arch, params, off);
  detail::Workspace ws;
  detail::forward_ws(arch, off, params.values, input.samples, ws);
  ComplexSeq out;
  out.sample_rate_hz = input.sample_rate_hz;
  out.samples.assign(ws.out.begin(), ws.out.end());
  return out;
}

// dLoss/dparams for upstream_grad[k] = dLoss/dRe(out[k]) + j dLoss/dIm(out[k]).
inline ParamVector backward(const ModelArch& arch, const ParamVector& params, const ComplexSeq& input,
                            const ComplexSeq& upstream_grad) {
  if (input.size() != upstream_grad.size())
    throw Error(ErrorKind::length_mismatch, "backward: upstream gradient length mismatch");
  const auto off = detail::arch_offsets(arch);
  detail::check_params(arch, params, off);
  detail::Workspace ws;
  detail::forward_ws(arch, off, params.values, input.samples, ws);
  ParamVector grad = zero_params_like(arch);
  detail::backward_ws(arch, off, params.values, input.samples, upstream_grad.samples, ws,
                      grad.values);
  return grad;
}

}  // namespace sic
