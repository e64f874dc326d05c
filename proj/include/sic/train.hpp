#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "sic/dataset.hpp"
#include "sic/errors.hpp"
#include "sic/model.hpp"

namespace sic {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint32_t epochs = 1;
  std::size_t batch_len = 0;  // 0 = full training range
  std::uint64_t seed = 0;
  std::uint32_t restarts = 1;  // independent inits, best test MSE wins

  void validate() const {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw Error(ErrorKind::config, "adam: lr must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw Error(ErrorKind::config, "adam: beta1 must be in (0,1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw Error(ErrorKind::config, "adam: beta2 must be in (0,1)");
    if (!(eps > 0.0)) throw Error(ErrorKind::config, "adam: eps must be positive");
    if (epochs == 0) throw Error(ErrorKind::config, "adam: epochs must be positive");
    if (restarts == 0) throw Error(ErrorKind::config, "adam: restarts must be positive");
  }
};

struct TrainReport {
  std::vector<std::pair<std::uint32_t, double>> loss_curve;  // (epoch, train MSE)
  double final_train_mse = 0.0;  // of the returned (best-test) parameters
  double final_test_mse = 0.0;
  std::uint32_t epochs_run = 0;
  double wall_time_s = 0.0;
  std::uint32_t best_epoch = 0;
  std::uint32_t best_restart = 0;
};

inline double mse_loss(const ComplexSeq& pred, const ComplexSeq& target) {
  if (pred.size() != target.size())
    throw Error(ErrorKind::length_mismatch, "mse_loss: sequence lengths differ");
  if (pred.samples.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) acc += std::norm(target.samples[k] - pred.samples[k]);
  return acc / static_cast<double>(pred.size());
}

namespace detail {

inline double mse_on_range(std::span<const cplx> pred, std::span<const cplx> target, IndexRange r) {
  if (r.length() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = r.begin; k < r.end; ++k) acc += std::norm(target[k] - pred[k]);
  return acc / static_cast<double>(r.length());
}

}  // namespace detail

struct AdamState {
  std::vector<double> m, v;
};

// One bias-corrected Adam update, elementwise, in place. Step index t starts
// at 1. A non-finite gradient aborts with the offending index.
inline void adam_step(ParamVector& params, std::span<const double> grads, AdamState& state,
                      const AdamConfig& cfg, std::uint64_t t) {
  const std::size_t n = params.values.size();
  if (grads.size() != n)
    throw Error(ErrorKind::length_mismatch, "adam_step: gradient length mismatch");
  if (t == 0) throw Error(ErrorKind::argument, "adam_step: step index starts at 1");
  if (state.m.size() != n) {
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads[i]))
      throw Error(ErrorKind::non_finite,
                  "adam_step: non-finite gradient at index " + std::to_string(i) + ", step " +
                      std::to_string(t));
  }
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < n; ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double mh = state.m[i] / bc1;
    const double vh = state.v[i] / bc2;
    params.values[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
  }
}

// Thrown when the training loss leaves the finite domain; carries the last
// finite state so callers can inspect the blow-up.
class TrainDivergence : public Error {
 public:
  TrainDivergence(std::string msg, TrainReport partial, ParamVector last_params)
      : Error(ErrorKind::divergence, std::move(msg)),
        partial_report(std::move(partial)),
        last_params(std::move(last_params)) {}

  TrainReport partial_report;
  ParamVector last_params;
};

// Full-batch (or chunked) Adam on the training range only. Checkpoints the
// best test-MSE parameters over every visited iterate and over restarts.
inline std::pair<ParamVector, TrainReport> train(const ModelArch& arch, const SiDataset& ds,
                                                 const AdamConfig& cfg) {
  cfg.validate();
  validate_dataset(ds);
  arch.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const auto off = detail::arch_offsets(arch);
  const IndexRange train_r = ds.split_train;
  const IndexRange test_r = ds.split_test;
  if (train_r.length() == 0) throw Error(ErrorKind::argument, "train: empty training range");
  const std::span<const cplx> x(ds.input.samples);
  const std::span<const cplx> y(ds.target.samples);
  const std::size_t n = x.size();

  ParamVector best_params;
  double best_test = std::numeric_limits<double>::infinity();
  TrainReport best_report;

  detail::Workspace ws;
  std::vector<double> grad(off.total);
  std::vector<cplx> upstream(n);

  for (std::uint32_t restart = 0; restart < cfg.restarts; ++restart) {
    ParamVector params = init_params(arch, derive_seed(cfg.seed, "restart." + std::to_string(restart)));
    AdamState state;
    TrainReport report;
    report.best_restart = restart;
    std::uint64_t step = 0;

    double run_best_test = std::numeric_limits<double>::infinity();
    ParamVector run_best_params = params;

    const std::size_t batch = (cfg.batch_len == 0 || cfg.batch_len >= train_r.length())
                                  ? train_r.length()
                                  : cfg.batch_len;

    auto consider = [&](const ParamVector& p, double test_mse, std::uint32_t epoch) {
      if (test_mse < run_best_test) {
        run_best_test = test_mse;
        run_best_params = p;
        report.best_epoch = epoch;
      }
    };

    for (std::uint32_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
      double epoch_train_mse = 0.0;
      for (std::size_t b0 = train_r.begin; b0 < train_r.end; b0 += batch) {
        const std::size_t b1 = std::min(b0 + batch, train_r.end);
        detail::forward_ws(arch, off, params.values, x, ws);
        if (b0 == train_r.begin) {
          epoch_train_mse = detail::mse_on_range(ws.out, y, train_r);
          if (!std::isfinite(epoch_train_mse)) {
            report.epochs_run = epoch - 1;
            report.final_train_mse = report.loss_curve.empty() ? epoch_train_mse
                                                               : report.loss_curve.back().second;
            throw TrainDivergence("train: loss became non-finite at epoch " + std::to_string(epoch),
                                  std::move(report), std::move(run_best_params));
          }
          consider(params, detail::mse_on_range(ws.out, y, test_r), epoch - 1);
        }
        std::fill(upstream.begin(), upstream.end(), cplx(0.0, 0.0));
        const double scale = 2.0 / static_cast<double>(b1 - b0);
        for (std::size_t k = b0; k < b1; ++k) upstream[k] = scale * (ws.out[k] - y[k]);
        detail::backward_ws(arch, off, params.values, x, upstream, ws, grad);
        adam_step(params, grad, state, cfg, ++step);
      }
      report.loss_curve.emplace_back(epoch, epoch_train_mse);
    }
    // the post-final-step iterate is a candidate too
    detail::forward_ws(arch, off, params.values, x, ws);
    consider(params, detail::mse_on_range(ws.out, y, test_r), cfg.epochs);
    report.epochs_run = cfg.epochs;

    if (run_best_test < best_test) {
      best_test = run_best_test;
      best_params = std::move(run_best_params);
      best_report = std::move(report);
    }
  }

  detail::forward_ws(arch, off, best_params.values, x, ws);
  best_report.final_train_mse = detail::mse_on_range(ws.out, y, train_r);
  best_report.final_test_mse = detail::mse_on_range(ws.out, y, test_r);
  best_report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(best_params), std::move(best_report)};
}

namespace detail {

// Partial-pivot LU solve of a dense complex system, in place.
inline std::vector<cplx> solve_complex(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double piv_mag = std::abs(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > piv_mag) {
        piv = r;
        piv_mag = std::abs(a[r][col]);
      }
    }
    if (!(piv_mag > 1e-300))
      throw Error(ErrorKind::numerical, "linear solve: singular system beyond ridge rescue");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    const cplx inv = 1.0 / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a[r][col] * inv;
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<cplx> sol(n);
  for (std::size_t r = n; r-- > 0;) {
    cplx acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * sol[c];
    sol[r] = acc / a[r][r];
  }
  return sol;
}

}  // namespace detail

// Closed-form complex least-squares FIR over the training range (normal
// equations, ridge 1e-9 on the Gram diagonal). Uses the same zero-padded
// causal regressors as the linear model's forward pass.
inline ParamVector fit_linear_ls(const SiDataset& ds, std::uint32_t context_len) {
  validate_dataset(ds);
  const std::size_t L = context_len;
  const std::size_t ntr = ds.split_train.length();
  if (ntr <= L)
    throw Error(ErrorKind::argument, "fit_linear_ls: training range must exceed context length");
  const auto& x = ds.input.samples;
  const auto& y = ds.target.samples;

  std::vector<std::vector<cplx>> gram(L, std::vector<cplx>(L, cplx(0.0, 0.0)));
  std::vector<cplx> rhs(L, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = i; j < L; ++j) {
      cplx acc(0.0, 0.0);
      // regressor r_k[i] = x[k-i] (zero for k < i)
      for (std::size_t k = std::max(i, j); k < ntr; ++k) acc += std::conj(x[k - i]) * x[k - j];
      gram[i][j] = acc;
      gram[j][i] = std::conj(acc);
    }
    cplx acc(0.0, 0.0);
    for (std::size_t k = i; k < ntr; ++k) acc += std::conj(x[k - i]) * y[k];
    rhs[i] = acc;
    gram[i][i] += 1e-9;
  }
  const auto taps = detail::solve_complex(std::move(gram), std::move(rhs));

  ModelArch lin = make_arch(ModelKind::linear, context_len);
  ParamVector p = zero_params_like(lin);
  for (std::size_t i = 0; i < L; ++i) {
    p.values[2 * i] = taps[i].real();
    p.values[2 * i + 1] = taps[i].imag();
  }
  return p;
}

struct TwoStageResult {
  ParamVector linear;      // stage-1 FIR (closed-form LS)
  ParamVector model;       // stage-2 parameters trained on the residual
  TrainReport report;
};

// Stage 1 removes the best linear fit; stage 2 trains the given architecture
// on the residual. The combined canceller output is linear + model.
inline TwoStageResult two_stage(const ModelArch& arch, const SiDataset& ds, const AdamConfig& cfg) {
  TwoStageResult res;
  res.linear = fit_linear_ls(ds, arch.context_len);
  const ModelArch lin = make_arch(ModelKind::linear, arch.context_len);
  const ComplexSeq lin_pred = forward(lin, res.linear, ds.input);

  SiDataset resid = ds;
  for (std::size_t k = 0; k < resid.target.size(); ++k)
    resid.target.samples[k] -= lin_pred.samples[k];
  auto [params, report] = train(arch, resid, cfg);
  res.model = std::move(params);
  res.report = std::move(report);
  return res;
}

// Combined two-stage prediction on an arbitrary input.
inline ComplexSeq predict_two_stage(const TwoStageResult& ts, const ModelArch& arch,
                                    const ComplexSeq& input) {
  const ModelArch lin = make_arch(ModelKind::linear, arch.context_len);
  ComplexSeq pred = forward(lin, ts.linear, input);
  const ComplexSeq stage2 = forward(arch, ts.model, input);
  for (std::size_t k = 0; k < pred.size(); ++k) pred.samples[k] += stage2.samples[k];
  return pred;
}

}  // namespace sic
