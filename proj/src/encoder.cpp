#include "tnav/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "serial.hpp"
#include "tnav/error.hpp"
#include "tnav/parallel.hpp"
#include "tnav/rng.hpp"

namespace tnav {

void EncoderSpec::validate() const {
  if (window_cells < 2) throw SpecError("encoder window_cells must be >= 2");
  if (margin_cells < window_cells / 2 + 1) {
    throw SpecError("encoder margin_cells too small for its window");
  }
  if (!(input_scale > 0.0)) throw SpecError("encoder input_scale must be > 0");
  MlpSpec net{input_size(), hidden, kNumChannels, act};
  net.validate();
}

MapEncoder::MapEncoder(EncoderSpec spec, Mlp net, std::array<double, kNumChannels> shift,
                       std::array<double, kNumChannels> scale)
    : spec_(std::move(spec)), net_(std::move(net)), shift_(shift), scale_(scale) {
  spec_.validate();
  if (net_.spec().input != spec_.input_size() || net_.spec().output != kNumChannels) {
    throw SpecError("encoder network shape does not match its spec");
  }
}

MapEncoder MapEncoder::init(const EncoderSpec& spec, std::uint64_t seed) {
  spec.validate();
  MlpSpec net_spec{spec.input_size(), spec.hidden, kNumChannels, spec.act};
  std::array<double, kNumChannels> shift{};
  std::array<double, kNumChannels> scale;
  scale.fill(1.0);
  return MapEncoder(spec, Mlp::init(net_spec, seed), shift, scale);
}

void MapEncoder::set_target_stats(const std::array<double, kNumChannels>& shift,
                                  const std::array<double, kNumChannels>& scale) {
  shift_ = shift;
  for (int c = 0; c < kNumChannels; ++c) {
    scale_[c] = std::max(1e-6, scale[c]);
  }
}

namespace {

// Axis-aligned window copy, mean-centered and scaled.
void window_input(const ElevationMap& map, int m, int n, int window, double input_scale,
                  std::vector<double>& out) {
  const int c = window / 2;
  const int m0 = m - c;
  const int n0 = n - c;
  out.resize(static_cast<std::size_t>(window) * window);
  double mean = 0.0;
  for (int a = 0; a < window; ++a) {
    const double* row = map.heights.data() + static_cast<std::size_t>(m0 + a) * map.width_cells + n0;
    for (int b = 0; b < window; ++b) {
      const double h = row[b];
      out[static_cast<std::size_t>(a) * window + b] = h;
      mean += h;
    }
  }
  mean /= static_cast<double>(out.size());
  const double inv = 1.0 / input_scale;
  for (double& v : out) v = (v - mean) * inv;
}

constexpr double kSigmaEps = 1e-9;

ChannelVector denormalize(std::span<const double> raw, const std::array<double, kNumChannels>& shift,
                          const std::array<double, kNumChannels>& scale) {
  ChannelVector ch;
  for (int c = 0; c < kNumChannels; ++c) {
    double v = raw[c] * scale[c] + shift[c];
    if (c == 0 || c == 1) v = std::max(0.0, v);           // amplitudes
    if (c == 4 || c == 5 || c >= 10) v = std::max(kSigmaEps, v);  // sigmas
    ch[c] = v;
  }
  return ch;
}

}  // namespace

ChannelVector MapEncoder::predict_cell(const ElevationMap& map, int m, int n,
                                       MlpWorkspace& ws) const {
  std::vector<double> input;
  window_input(map, m, n, spec_.window_cells, spec_.input_scale, input);
  const auto raw = net_.forward(input, ws);
  return denormalize(raw, shift_, scale_);
}

namespace {

struct CellRef {
  std::uint32_t pair;
  std::uint32_t cell;
};

// L1 loss in normalized target space plus parameter gradient for one cell.
double l1_with_gradient(const MapEncoder& enc, const ElevationMap& map,
                        const TraversabilityMap& labels, std::uint32_t cell,
                        std::vector<double>& input, MlpWorkspace& ws, std::span<double> grad) {
  const int n_cols = map.width_cells;
  const int m = static_cast<int>(cell) / n_cols;
  const int n = static_cast<int>(cell) % n_cols;
  window_input(map, m, n, enc.spec().window_cells, enc.spec().input_scale, input);
  const auto out = enc.net().forward(input, ws);

  const std::size_t cells = labels.cell_count();
  std::array<double, kNumChannels> d_out;
  double loss = 0.0;
  for (int c = 0; c < kNumChannels; ++c) {
    const double target =
        (labels.channels[static_cast<std::size_t>(c) * cells + cell] - enc.target_shift()[c]) /
        enc.target_scale()[c];
    const double r = out[c] - target;
    loss += std::abs(r);
    d_out[c] = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  }
  enc.net().backward(d_out, ws, grad);
  return loss;
}

double l1_value(const MapEncoder& enc, const ElevationMap& map, const TraversabilityMap& labels,
                std::uint32_t cell, std::vector<double>& input, MlpWorkspace& ws) {
  const int n_cols = map.width_cells;
  const int m = static_cast<int>(cell) / n_cols;
  const int n = static_cast<int>(cell) % n_cols;
  window_input(map, m, n, enc.spec().window_cells, enc.spec().input_scale, input);
  const auto out = enc.net().forward(input, ws);
  const std::size_t cells = labels.cell_count();
  double loss = 0.0;
  for (int c = 0; c < kNumChannels; ++c) {
    const double target =
        (labels.channels[static_cast<std::size_t>(c) * cells + cell] - enc.target_shift()[c]) /
        enc.target_scale()[c];
    loss += std::abs(out[c] - target);
  }
  return loss;
}

double mean_l1(const MapEncoder& enc, const std::vector<EncoderPair>& pairs,
               std::span<const CellRef> refs) {
  if (refs.empty()) return 0.0;
  const std::size_t blocks = parallel_block_count(refs.size());
  std::vector<double> partial(blocks, 0.0);
  parallel_for_blocks(refs.size(), [&](std::size_t blk, std::size_t begin, std::size_t end) {
    MlpWorkspace ws;
    std::vector<double> input;
    double loss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      loss += l1_value(enc, *pairs[refs[i].pair].map, *pairs[refs[i].pair].labels, refs[i].cell,
                       input, ws);
    }
    partial[blk] = loss;
  });
  double total = 0.0;
  for (const double p : partial) total += p;
  return total / static_cast<double>(refs.size());
}

}  // namespace

TrainHistory train_encoder(MapEncoder& enc, const std::vector<EncoderPair>& pairs,
                           const EncoderTrainConfig& cfg) {
  cfg.base.validate();
  if (pairs.empty()) throw SpecError("train_encoder: no training pairs");
  for (const auto& pr : pairs) {
    if (pr.map == nullptr || pr.labels == nullptr) {
      throw SpecError("train_encoder: null pair entry");
    }
    if (pr.map->height_cells != pr.labels->height_cells ||
        pr.map->width_cells != pr.labels->width_cells) {
      throw SpecError("train_encoder: elevation/label geometry mismatch");
    }
  }

  // All cells that are label-valid and whose window fits.
  const int wc = enc.spec().window_cells / 2 + 1;
  std::vector<CellRef> refs;
  for (std::uint32_t p = 0; p < pairs.size(); ++p) {
    const auto& tm = *pairs[p].labels;
    for (int m = wc; m < tm.height_cells - wc; ++m) {
      for (int n = wc; n < tm.width_cells - wc; ++n) {
        const std::size_t idx = tm.cell_index(m, n);
        if (tm.valid[idx]) refs.push_back({p, static_cast<std::uint32_t>(idx)});
      }
    }
  }
  if (refs.empty()) throw SpecError("train_encoder: no valid training cells");

  // Normalization stats over the training labels.
  {
    std::array<double, kNumChannels> mean{}, sq{};
    for (const auto& ref : refs) {
      const auto& tm = *pairs[ref.pair].labels;
      const std::size_t cells = tm.cell_count();
      for (int c = 0; c < kNumChannels; ++c) {
        const double v = tm.channels[static_cast<std::size_t>(c) * cells + ref.cell];
        mean[c] += v;
        sq[c] += v * v;
      }
    }
    std::array<double, kNumChannels> scale;
    for (int c = 0; c < kNumChannels; ++c) {
      mean[c] /= static_cast<double>(refs.size());
      const double var = sq[c] / static_cast<double>(refs.size()) - mean[c] * mean[c];
      scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    enc.set_target_stats(mean, scale);
  }

  Rng rng(derive_seed(cfg.base.seed, 0x656e63));
  std::shuffle(refs.begin(), refs.end(), rng);
  std::size_t n_val =
      static_cast<std::size_t>(cfg.base.validation_fraction * static_cast<double>(refs.size()));
  if (cfg.base.validation_fraction > 0.0 && n_val == 0 && refs.size() >= 2) n_val = 1;
  std::vector<CellRef> val_refs(refs.end() - n_val, refs.end());
  refs.resize(refs.size() - n_val);

  Optimizer opt(cfg.base.optimizer, enc.net().params().size(), cfg.base.learning_rate);
  std::vector<double> grad(enc.net().params().size(), 0.0);

  TrainHistory history;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params(enc.net().params().begin(), enc.net().params().end());

  const std::size_t per_epoch =
      std::min<std::size_t>(refs.size(), std::max(1, cfg.cells_per_epoch));
  for (int epoch = 0; epoch < cfg.base.epochs; ++epoch) {
    std::shuffle(refs.begin(), refs.end(), rng);
    double epoch_loss = 0.0;
    std::size_t processed = 0;
    for (std::size_t start = 0; start < per_epoch; start += cfg.base.batch_size) {
      const std::size_t end = std::min(per_epoch, start + cfg.base.batch_size);
      const std::span<const CellRef> batch(refs.data() + start, end - start);

      std::fill(grad.begin(), grad.end(), 0.0);
      const std::size_t blocks = parallel_block_count(batch.size());
      std::vector<std::vector<double>> partial(blocks, std::vector<double>(grad.size(), 0.0));
      std::vector<double> losses(blocks, 0.0);
      parallel_for_blocks(batch.size(), [&](std::size_t blk, std::size_t b0, std::size_t b1) {
        MlpWorkspace ws;
        std::vector<double> input;
        double loss = 0.0;
        for (std::size_t i = b0; i < b1; ++i) {
          loss += l1_with_gradient(enc, *pairs[batch[i].pair].map, *pairs[batch[i].pair].labels,
                                   batch[i].cell, input, ws, partial[blk]);
        }
        losses[blk] = loss;
      });
      for (std::size_t b = 0; b < blocks; ++b) {
        epoch_loss += losses[b];
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += partial[b][i];
      }
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (double& g : grad) g *= inv;
      opt.apply(enc.net().params(), grad);
      processed += batch.size();
    }
    const double train_mean = epoch_loss / static_cast<double>(processed);
    const double val_mean =
        val_refs.empty() ? mean_l1(enc, pairs, std::span<const CellRef>(refs.data(), per_epoch))
                         : mean_l1(enc, pairs, val_refs);
    history.train_nll.push_back(train_mean);
    history.val_nll.push_back(val_mean);
    if (val_mean < best_val) {
      best_val = val_mean;
      best_params.assign(enc.net().params().begin(), enc.net().params().end());
      history.best_epoch = epoch;
    }
  }
  enc.net().set_params(best_params);
  return history;
}

TraversabilityMap infer_map(const MapEncoder& enc, const ElevationMap& map,
                            const CombineWeights& weights) {
  weights.validate();
  const int margin = std::max(enc.spec().margin_cells, enc.spec().window_cells / 2 + 1);
  if (map.height_cells <= 2 * margin || map.width_cells <= 2 * margin) {
    throw SpecError("infer_map: map smaller than the encoder validity band");
  }

  TraversabilityMap tm;
  tm.height_cells = map.height_cells;
  tm.width_cells = map.width_cells;
  tm.resolution = map.resolution;
  tm.origin_x = map.origin_x;
  tm.origin_y = map.origin_y;
  tm.weights = weights;
  const std::size_t cells = tm.cell_count();
  tm.channels.assign(static_cast<std::size_t>(kNumChannels) * cells, 0.0f);
  tm.combined.assign(cells, 0.0f);
  tm.valid.assign(cells, 0);

  const int lo_m = margin, hi_m = map.height_cells - 1 - margin;
  const int lo_n = margin, hi_n = map.width_cells - 1 - margin;
  const std::size_t rows = static_cast<std::size_t>(hi_m - lo_m + 1);
  const std::size_t cols = static_cast<std::size_t>(hi_n - lo_n + 1);

  parallel_for_blocks(rows * cols, [&](std::size_t, std::size_t begin, std::size_t end) {
    MlpWorkspace ws;
    for (std::size_t i = begin; i < end; ++i) {
      const int m = lo_m + static_cast<int>(i / cols);
      const int n = lo_n + static_cast<int>(i % cols);
      const ChannelVector ch = enc.predict_cell(map, m, n, ws);
      const std::size_t idx = tm.cell_index(m, n);
      for (int c = 0; c < kNumChannels; ++c) {
        tm.channels[static_cast<std::size_t>(c) * cells + idx] = static_cast<float>(ch[c]);
      }
      tm.combined[idx] = static_cast<float>(combine(ch, weights));
      tm.valid[idx] = 1;
    }
  });

  const float worst = static_cast<float>(tm.max_combined());
  for (std::size_t i = 0; i < cells; ++i) {
    if (!tm.valid[i]) tm.combined[i] = worst;
  }
  return tm;
}

double reconstruction_mae(const MapEncoder& enc, const ElevationMap& map,
                          const TraversabilityMap& labels) {
  if (map.height_cells != labels.height_cells || map.width_cells != labels.width_cells) {
    throw SpecError("reconstruction_mae: geometry mismatch");
  }
  const int wc = enc.spec().window_cells / 2 + 1;
  MlpWorkspace ws;
  double total = 0.0;
  std::size_t count = 0;
  const std::size_t cells = labels.cell_count();
  for (int m = wc; m < labels.height_cells - wc; ++m) {
    for (int n = wc; n < labels.width_cells - wc; ++n) {
      const std::size_t idx = labels.cell_index(m, n);
      if (!labels.valid[idx]) continue;
      const ChannelVector ch = enc.predict_cell(map, m, n, ws);
      for (int c = 0; c < kNumChannels; ++c) {
        total += std::abs(ch[c] - labels.channels[static_cast<std::size_t>(c) * cells + idx]);
      }
      count += kNumChannels;
    }
  }
  if (count == 0) throw SpecError("reconstruction_mae: no overlapping valid cells");
  return total / static_cast<double>(count);
}

namespace {
constexpr char kMagic[4] = {'T', 'N', 'T', 'E'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_encoder(const MapEncoder& enc, const std::string& path) {
  serial::Writer w(path);
  w.magic(kMagic);
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(enc.spec().window_cells));
  w.u32(static_cast<std::uint32_t>(enc.spec().margin_cells));
  w.u8(enc.spec().act == Activation::Tanh ? 0 : 1);
  w.f64(enc.spec().input_scale);
  w.u32(static_cast<std::uint32_t>(enc.spec().hidden.size()));
  for (const int h : enc.spec().hidden) w.u32(static_cast<std::uint32_t>(h));
  for (const double v : enc.target_shift()) w.f64(v);
  for (const double v : enc.target_scale()) w.f64(v);
  const auto params = enc.net().params();
  w.u64(params.size());
  for (const double p : params) w.f64(p);
  w.close();
}

MapEncoder read_encoder(const std::string& path) {
  serial::Reader r(path);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw FormatError("unsupported TNTE version " + std::to_string(version) + " in " + path);
  }
  EncoderSpec spec;
  spec.window_cells = static_cast<int>(r.u32("window_cells"));
  spec.margin_cells = static_cast<int>(r.u32("margin_cells"));
  spec.act = r.u8("activation") == 0 ? Activation::Tanh : Activation::Relu;
  spec.input_scale = r.f64("input_scale");
  const std::uint32_t n_hidden = r.u32("hidden count");
  if (n_hidden > 64) throw FormatError("implausible TNTE hidden layer count in " + path);
  spec.hidden.clear();
  for (std::uint32_t i = 0; i < n_hidden; ++i) {
    spec.hidden.push_back(static_cast<int>(r.u32("hidden width")));
  }
  std::array<double, kNumChannels> shift, scale;
  for (auto& v : shift) v = r.f64("target shift");
  for (auto& v : scale) v = r.f64("target scale");
  const std::uint64_t count = r.u64("param count");
  MlpSpec net_spec{spec.input_size(), spec.hidden, kNumChannels, spec.act};
  if (count != net_spec.param_count()) {
    throw FormatError("TNTE parameter count does not match architecture in " + path);
  }
  std::vector<double> params(count);
  for (std::uint64_t i = 0; i < count; ++i) params[i] = r.f64("params");
  return MapEncoder(spec, Mlp(net_spec, std::move(params)), shift, scale);
}

}  // namespace tnav
