#include "tnav/mlp.hpp"

#include <cmath>

#include "tnav/error.hpp"
#include "tnav/rng.hpp"

namespace tnav {

Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "relu") return Activation::Relu;
  throw SpecError("unknown activation: '" + s + "'");
}

std::string to_string(Activation a) { return a == Activation::Tanh ? "tanh" : "relu"; }

std::vector<int> MlpSpec::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(input);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(output);
  return sizes;
}

std::size_t MlpSpec::param_count() const {
  const auto sizes = layer_sizes();
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  }
  return n;
}

void MlpSpec::validate() const {
  if (input <= 0 || output <= 0) throw SpecError("network needs positive input/output widths");
  for (const int h : hidden) {
    if (h <= 0) throw SpecError("network hidden layer width must be > 0");
  }
}

Mlp::Mlp(MlpSpec spec, std::vector<double> params) : spec_(std::move(spec)) {
  spec_.validate();
  if (params.size() != spec_.param_count()) {
    throw SpecError("network parameter count mismatch: expected " +
                    std::to_string(spec_.param_count()) + ", got " +
                    std::to_string(params.size()));
  }
  params_ = std::move(params);
}

Mlp Mlp::init(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<double> params(spec.param_count());
  Rng rng(seed);
  const auto sizes = spec.layer_sizes();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int i = 0; i < fan_out * fan_in; ++i) {
      params[off++] = draw_uniform(rng, -bound, bound);
    }
    for (int i = 0; i < fan_out; ++i) params[off++] = 0.0;
  }
  return Mlp(spec, std::move(params));
}

void Mlp::set_params(std::span<const double> p) {
  if (p.size() != params_.size()) throw SpecError("set_params size mismatch");
  std::copy(p.begin(), p.end(), params_.begin());
}

void Mlp::prepare(MlpWorkspace& ws) const {
  const auto sizes = spec_.layer_sizes();
  ws.act.assign(sizes.size(), {});
  ws.pre.assign(sizes.size() - 1, {});
  ws.delta.assign(sizes.size() - 1, {});
  for (std::size_t l = 0; l < sizes.size(); ++l) ws.act[l].assign(sizes[l], 0.0);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    ws.pre[l].assign(sizes[l + 1], 0.0);
    ws.delta[l].assign(sizes[l + 1], 0.0);
  }
}

std::span<const double> Mlp::forward(std::span<const double> input, MlpWorkspace& ws) const {
  const auto sizes = spec_.layer_sizes();
  if (static_cast<int>(input.size()) != spec_.input) {
    throw SpecError("network input size mismatch: expected " + std::to_string(spec_.input) +
                    ", got " + std::to_string(input.size()));
  }
  if (ws.act.size() != sizes.size()) prepare(ws);
  std::copy(input.begin(), input.end(), ws.act[0].begin());

  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in_n = sizes[l];
    const int out_n = sizes[l + 1];
    const double* w = params_.data() + off;
    const double* b = params_.data() + off + static_cast<std::size_t>(out_n) * in_n;
    const double* x = ws.act[l].data();
    const bool last = (l + 2 == sizes.size());
    for (int o = 0; o < out_n; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in_n;
      double s = b[o];
      for (int i = 0; i < in_n; ++i) s += row[i] * x[i];
      ws.pre[l][o] = s;
      if (last) {
        ws.act[l + 1][o] = s;  // linear output layer
      } else if (spec_.act == Activation::Tanh) {
        ws.act[l + 1][o] = std::tanh(s);
      } else {
        ws.act[l + 1][o] = s > 0.0 ? s : 0.0;
      }
    }
    off += static_cast<std::size_t>(out_n) * in_n + out_n;
  }
  return ws.act.back();
}

void Mlp::backward(std::span<const double> d_output, MlpWorkspace& ws,
                   std::span<double> grad) const {
  const auto sizes = spec_.layer_sizes();
  const std::size_t layers = sizes.size() - 1;
  if (grad.size() != params_.size()) throw SpecError("gradient buffer size mismatch");

  std::copy(d_output.begin(), d_output.end(), ws.delta[layers - 1].begin());

  // Layer parameter offsets.
  std::vector<std::size_t> offsets(layers);
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = off;
    off += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  }

  for (std::size_t l = layers; l-- > 0;) {
    const int in_n = sizes[l];
    const int out_n = sizes[l + 1];
    const double* x = ws.act[l].data();
    double* d = ws.delta[l].data();

    // Activation derivative (output layer is linear).
    if (l + 1 != layers) {
      for (int o = 0; o < out_n; ++o) {
        if (spec_.act == Activation::Tanh) {
          const double t = ws.act[l + 1][o];
          d[o] *= (1.0 - t * t);
        } else {
          d[o] *= ws.pre[l][o] > 0.0 ? 1.0 : 0.0;
        }
      }
    }

    double* gw = grad.data() + offsets[l];
    double* gb = gw + static_cast<std::size_t>(out_n) * in_n;
    for (int o = 0; o < out_n; ++o) {
      const double dv = d[o];
      double* grow = gw + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) grow[i] += dv * x[i];
      gb[o] += dv;
    }

    if (l > 0) {
      const double* w = params_.data() + offsets[l];
      double* dprev = ws.delta[l - 1].data();
      std::fill(dprev, dprev + in_n, 0.0);
      for (int o = 0; o < out_n; ++o) {
        const double dv = d[o];
        const double* row = w + static_cast<std::size_t>(o) * in_n;
        for (int i = 0; i < in_n; ++i) dprev[i] += dv * row[i];
      }
    }
  }
}

std::size_t Mlp::final_layer_weight_offset(int unit) const {
  const auto sizes = spec_.layer_sizes();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 2 < sizes.size(); ++l) {
    off += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  }
  const int in_n = sizes[sizes.size() - 2];
  return off + static_cast<std::size_t>(unit) * in_n;
}

std::size_t Mlp::final_layer_bias_offset(int unit) const {
  const auto sizes = spec_.layer_sizes();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 2 < sizes.size(); ++l) {
    off += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  }
  const int in_n = sizes[sizes.size() - 2];
  const int out_n = sizes.back();
  return off + static_cast<std::size_t>(out_n) * in_n + unit;
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "adam") return OptimizerKind::Adam;
  throw SpecError("unknown optimizer: '" + s + "'");
}

Optimizer::Optimizer(OptimizerKind kind, std::size_t n, double lr) : kind_(kind), lr_(lr) {
  if (!(lr > 0.0)) throw SpecError("learning rate must be > 0");
  if (kind_ == OptimizerKind::Adam) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
  }
}

void Optimizer::apply(std::span<double> params, std::span<const double> grad) {
  if (kind_ == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grad[i];
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++step_;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mh = m_[i] / bc1;
    const double vh = v_[i] / bc2;
    params[i] -= lr_ * mh / (std::sqrt(vh) + eps);
  }
}

}  // namespace tnav
