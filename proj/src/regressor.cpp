#include "tnav/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "serial.hpp"
#include "tnav/error.hpp"
#include "tnav/parallel.hpp"
#include "tnav/rng.hpp"

namespace tnav {

void RegressorSpec::validate() const {
  if (patch_cells < 2) throw SpecError("regressor patch_cells must be >= 2");
  if (k != 2 && k != 4) throw SpecError("regressor k must be 2 or 4");
  if (!(sigma_floor > 0.0)) throw SpecError("regressor sigma_floor must be > 0");
  if (!(input_scale > 0.0)) throw SpecError("regressor input_scale must be > 0");
  MlpSpec net{input_size(), hidden, 2 * k, act};
  net.validate();
}

Regressor::Regressor(RegressorSpec spec, Mlp net) : spec_(std::move(spec)), net_(std::move(net)) {
  spec_.validate();
  if (net_.spec().input != spec_.input_size() || net_.spec().output != 2 * spec_.k) {
    throw SpecError("regressor network shape does not match its spec");
  }
}

Regressor Regressor::init(const RegressorSpec& spec, std::uint64_t seed) {
  spec.validate();
  MlpSpec net_spec{spec.input_size(), spec.hidden, 2 * spec.k, spec.act};
  Mlp net = Mlp::init(net_spec, seed);
  // Pin the sigma head at zero so initial sigma == sigma_floor + 1.
  const auto sizes = net_spec.layer_sizes();
  const int in_n = sizes[sizes.size() - 2];
  auto params = net.params();
  for (int unit = spec.k; unit < 2 * spec.k; ++unit) {
    const std::size_t w_off = net.final_layer_weight_offset(unit);
    for (int i = 0; i < in_n; ++i) params[w_off + i] = 0.0;
    params[net.final_layer_bias_offset(unit)] = 0.0;
  }
  return Regressor(spec, std::move(net));
}

template <typename T>
void Regressor::normalize(std::span<const T> cells, std::vector<double>& out) const {
  const std::size_t n = cells.size();
  out.resize(n);
  double mean = 0.0;
  for (const T c : cells) mean += c;
  mean /= static_cast<double>(n);
  const double inv = 1.0 / spec_.input_scale;
  for (std::size_t i = 0; i < n; ++i) out[i] = (cells[i] - mean) * inv;
}

template void Regressor::normalize<float>(std::span<const float>, std::vector<double>&) const;
template void Regressor::normalize<double>(std::span<const double>, std::vector<double>&) const;

GaussianPrediction Regressor::forward_normalized(std::span<const double> input,
                                                 MlpWorkspace& ws) const {
  const auto out = net_.forward(input, ws);
  GaussianPrediction pred;
  pred.mu.assign(out.begin(), out.begin() + spec_.k);
  pred.sigma.resize(spec_.k);
  for (int i = 0; i < spec_.k; ++i) {
    pred.sigma[i] = spec_.sigma_floor + std::exp(out[spec_.k + i]);
  }
  return pred;
}

GaussianPrediction Regressor::forward_cells(std::span<const float> cells) const {
  if (static_cast<int>(cells.size()) != spec_.input_size()) {
    throw SpecError("regressor input dimension mismatch: expected " +
                    std::to_string(spec_.input_size()) + " cells, got " +
                    std::to_string(cells.size()));
  }
  std::vector<double> input;
  normalize(cells, input);
  MlpWorkspace ws;
  return forward_normalized(input, ws);
}

GaussianPrediction Regressor::forward(const TerrainPatch& patch) const {
  if (static_cast<int>(patch.cells.size()) != spec_.input_size()) {
    throw SpecError("regressor input dimension mismatch: expected " +
                    std::to_string(spec_.input_size()) + " cells, got " +
                    std::to_string(patch.cells.size()));
  }
  std::vector<double> input;
  normalize(std::span<const double>(patch.cells), input);
  MlpWorkspace ws;
  return forward_normalized(input, ws);
}

double nll_value(std::span<const double> mu, std::span<const double> sigma,
                 std::span<const float> target) {
  if (mu.size() != sigma.size() || mu.size() != target.size()) {
    throw SpecError("nll_value component count mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(mu[i]) || !std::isfinite(sigma[i]) || !std::isfinite(target[i])) {
      throw NumericError("non-finite value in NLL input");
    }
    if (!(sigma[i] > 0.0)) throw NumericError("sigma must be > 0 in NLL");
    const double r = mu[i] - target[i];
    loss += 0.5 * (std::log(sigma[i] * sigma[i]) + (r * r) / (sigma[i] * sigma[i]));
  }
  return loss;
}

double nll_with_gradient(const Regressor& reg, std::span<const float> cells,
                         std::span<const float> target, std::span<double> grad, MlpWorkspace& ws) {
  const int k = reg.spec_.k;
  if (static_cast<int>(target.size()) != k) throw SpecError("target dimension mismatch");
  std::vector<double> input;
  reg.normalize(cells, input);
  const auto out = reg.net_.forward(input, ws);

  std::vector<double> d_out(2 * static_cast<std::size_t>(k), 0.0);
  double loss = 0.0;
  for (int i = 0; i < k; ++i) {
    const double mu = out[i];
    const double raw = out[k + i];
    const double e = std::exp(raw);
    const double sigma = reg.spec_.sigma_floor + e;
    const double r = mu - target[i];
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(static_cast<double>(target[i]))) {
      throw NumericError("non-finite value in NLL input");
    }
    loss += 0.5 * (std::log(sigma * sigma) + (r * r) / (sigma * sigma));
    d_out[i] = r / (sigma * sigma);
    // dL/dsigma = 1/sigma - r^2/sigma^3, dsigma/draw = e.
    d_out[k + i] = (1.0 / sigma - (r * r) / (sigma * sigma * sigma)) * e;
  }
  reg.net_.backward(d_out, ws, grad);
  return loss;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw SpecError("learning rate must be > 0");
  if (batch_size < 1) throw SpecError("batch size must be >= 1");
  if (epochs < 1) throw SpecError("epochs must be >= 1");
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw SpecError("validation fraction must lie in [0, 1)");
  }
}

namespace {

std::size_t patch_len(const Dataset& d) {
  return static_cast<std::size_t>(d.patch_cells) * d.patch_cells;
}

std::span<const float> sample_cells(const Dataset& d, std::size_t i) {
  return {d.patch(i), patch_len(d)};
}

std::span<const float> sample_target(const Dataset& d, std::size_t i) {
  return {d.target(i), static_cast<std::size_t>(d.target_dim)};
}

// Deterministic parallel minibatch gradient: contiguous index blocks with
// per-block buffers, reduced in block order.
double batch_gradient(const Regressor& reg, const Dataset& data,
                      std::span<const std::size_t> batch, std::vector<double>& grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  const std::size_t blocks = parallel_block_count(batch.size());
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(grad.size(), 0.0));
  std::vector<double> losses(blocks, 0.0);
  parallel_for_blocks(batch.size(), [&](std::size_t blk, std::size_t begin, std::size_t end) {
    MlpWorkspace ws;
    double loss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t s = batch[i];
      loss += nll_with_gradient(reg, sample_cells(data, s), sample_target(data, s), partial[blk],
                                ws);
    }
    losses[blk] = loss;
  });
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    total += losses[b];
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += partial[b][i];
  }
  return total;
}

}  // namespace

double dataset_nll(const Regressor& reg, const Dataset& data,
                   std::span<const std::size_t> indices) {
  if (indices.empty()) throw SpecError("dataset_nll: no samples");
  const std::size_t blocks = parallel_block_count(indices.size());
  std::vector<double> losses(blocks, 0.0);
  parallel_for_blocks(indices.size(), [&](std::size_t blk, std::size_t begin, std::size_t end) {
    double loss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t s = indices[i];
      const GaussianPrediction p = reg.forward_cells(sample_cells(data, s));
      loss += nll_value(p.mu, p.sigma, sample_target(data, s));
    }
    losses[blk] = loss;
  });
  double total = 0.0;
  for (const double l : losses) total += l;
  return total / static_cast<double>(indices.size());
}

double constant_baseline_nll(const Dataset& data, std::span<const std::size_t> fit,
                             std::span<const std::size_t> eval, double sigma_floor) {
  if (fit.empty() || eval.empty()) throw SpecError("constant_baseline_nll: no samples");
  const int k = data.target_dim;
  std::vector<double> mean(k, 0.0), var(k, 0.0);
  for (const std::size_t s : fit) {
    for (int c = 0; c < k; ++c) mean[c] += data.target(s)[c];
  }
  for (int c = 0; c < k; ++c) mean[c] /= static_cast<double>(fit.size());
  for (const std::size_t s : fit) {
    for (int c = 0; c < k; ++c) {
      const double r = data.target(s)[c] - mean[c];
      var[c] += r * r;
    }
  }
  std::vector<double> sigma(k);
  for (int c = 0; c < k; ++c) {
    sigma[c] = std::max(sigma_floor, std::sqrt(var[c] / static_cast<double>(fit.size())));
  }
  double total = 0.0;
  for (const std::size_t s : eval) {
    total += nll_value(mean, sigma, sample_target(data, s));
  }
  return total / static_cast<double>(eval.size());
}

TrainHistory train_regressor(Regressor& reg, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw SpecError("train_regressor: dataset is empty");
  if (data.target_dim != reg.spec().k) {
    throw SpecError("train_regressor: dataset target dimension " +
                    std::to_string(data.target_dim) + " does not match regressor k=" +
                    std::to_string(reg.spec().k));
  }
  if (data.patch_cells != reg.spec().patch_cells) {
    throw SpecError("train_regressor: dataset patch_cells mismatch");
  }

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(cfg.seed, 0x7261696e));
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(n));
  if (cfg.validation_fraction > 0.0 && n_val == 0 && n >= 2) n_val = 1;
  const std::size_t n_train = n - n_val;
  if (n_train == 0) throw SpecError("train_regressor: no training samples after split");
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val_idx(order.begin() + n_train, order.end());

  Optimizer opt(cfg.optimizer, reg.net().params().size(), cfg.learning_rate);
  std::vector<double> grad(reg.net().params().size(), 0.0);

  TrainHistory history;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params(reg.net().params().begin(), reg.net().params().end());

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
      const std::size_t end = std::min(n_train, start + cfg.batch_size);
      const std::span<const std::size_t> batch(train_idx.data() + start, end - start);
      const double batch_loss = batch_gradient(reg, data, batch, grad);
      epoch_loss += batch_loss;
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (double& g : grad) g *= inv;
      opt.apply(reg.net().params(), grad);
    }
    const double train_mean = epoch_loss / static_cast<double>(n_train);
    const double val_mean = val_idx.empty() ? dataset_nll(reg, data, train_idx)
                                            : dataset_nll(reg, data, val_idx);
    history.train_nll.push_back(train_mean);
    history.val_nll.push_back(val_mean);
    if (val_mean < best_val) {
      best_val = val_mean;
      best_params.assign(reg.net().params().begin(), reg.net().params().end());
      history.best_epoch = epoch;
    }
  }
  reg.net().set_params(best_params);
  return history;
}

double grad_check(const Regressor& reg, std::span<const float> cells,
                  std::span<const float> target, double epsilon) {
  if (epsilon < 1e-7 || epsilon > 1e-3) throw SpecError("grad_check epsilon out of [1e-7, 1e-3]");
  Regressor work = reg;
  MlpWorkspace ws;
  std::vector<double> analytic(work.net().params().size(), 0.0);
  nll_with_gradient(work, cells, target, analytic, ws);

  auto loss_at = [&](std::size_t i, double value) {
    const double saved = work.net().params()[i];
    work.net().params()[i] = value;
    std::vector<double> scratch(analytic.size(), 0.0);
    const double loss = nll_with_gradient(work, cells, target, scratch, ws);
    work.net().params()[i] = saved;
    return loss;
  };

  double max_rel = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double p = work.net().params()[i];
    const double lo = loss_at(i, p - epsilon);
    const double hi = loss_at(i, p + epsilon);
    const double numeric = (hi - lo) / (2.0 * epsilon);
    const double denom = std::max(1e-6, std::abs(analytic[i]) + std::abs(numeric));
    max_rel = std::max(max_rel, std::abs(analytic[i] - numeric) / denom);
  }
  return max_rel;
}

namespace {
constexpr char kMagic[4] = {'T', 'N', 'T', 'M'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_regressor(const Regressor& reg, const std::string& path) {
  serial::Writer w(path);
  w.magic(kMagic);
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(reg.spec().patch_cells));
  w.u32(static_cast<std::uint32_t>(reg.spec().k));
  w.u8(reg.spec().act == Activation::Tanh ? 0 : 1);
  w.f64(reg.spec().sigma_floor);
  w.f64(reg.spec().input_scale);
  w.u32(static_cast<std::uint32_t>(reg.spec().hidden.size()));
  for (const int h : reg.spec().hidden) w.u32(static_cast<std::uint32_t>(h));
  const auto params = reg.net().params();
  w.u64(params.size());
  for (const double p : params) w.f64(p);
  w.close();
}

Regressor read_regressor(const std::string& path) {
  serial::Reader r(path);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw FormatError("unsupported TNTM version " + std::to_string(version) + " in " + path);
  }
  RegressorSpec spec;
  spec.patch_cells = static_cast<int>(r.u32("patch_cells"));
  spec.k = static_cast<int>(r.u32("k"));
  spec.act = r.u8("activation") == 0 ? Activation::Tanh : Activation::Relu;
  spec.sigma_floor = r.f64("sigma_floor");
  spec.input_scale = r.f64("input_scale");
  const std::uint32_t n_hidden = r.u32("hidden count");
  if (n_hidden > 64) throw FormatError("implausible TNTM hidden layer count in " + path);
  spec.hidden.clear();
  for (std::uint32_t i = 0; i < n_hidden; ++i) {
    spec.hidden.push_back(static_cast<int>(r.u32("hidden width")));
  }
  const std::uint64_t count = r.u64("param count");
  MlpSpec net_spec{spec.input_size(), spec.hidden, 2 * spec.k, spec.act};
  if (count != net_spec.param_count()) {
    throw FormatError("TNTM parameter count does not match architecture in " + path);
  }
  std::vector<double> params(count);
  for (std::uint64_t i = 0; i < count; ++i) params[i] = r.f64("params");
  return Regressor(spec, Mlp(net_spec, std::move(params)));
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "epoch,train_nll,val_nll\n";
  char buf[96];
  for (std::size_t e = 0; e < history.train_nll.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", e, history.train_nll[e],
                  history.val_nll[e]);
    out << buf;
  }
}

}  // namespace tnav
