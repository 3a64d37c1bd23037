#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tnav {

enum class Activation { Tanh, Relu };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Fully connected network shape. Parameters are stored flat, layer by layer:
// weights (out x in, row-major) then biases.
struct MlpSpec {
  int input = 0;
  std::vector<int> hidden;
  int output = 0;
  Activation act = Activation::Tanh;

  std::vector<int> layer_sizes() const;  // input, hidden..., output
  std::size_t param_count() const;
  void validate() const;  // throws SpecError on zero-width layers
};

// Scratch buffers for one forward/backward pass; reuse across samples.
struct MlpWorkspace {
  std::vector<std::vector<double>> act;    // activations per layer (incl. input)
  std::vector<std::vector<double>> pre;    // pre-activations per non-input layer
  std::vector<std::vector<double>> delta;  // backprop buffers
};

class Mlp {
 public:
  Mlp() = default;
  Mlp(MlpSpec spec, std::vector<double> params);

  // Uniform fan-in initialization: weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)),
  // biases zero. Deterministic in the seed.
  static Mlp init(const MlpSpec& spec, std::uint64_t seed);

  const MlpSpec& spec() const { return spec_; }
  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  void set_params(std::span<const double> p);

  void prepare(MlpWorkspace& ws) const;

  // Writes the output activations into ws.act.back() and returns a view.
  std::span<const double> forward(std::span<const double> input, MlpWorkspace& ws) const;

  // Accumulates dLoss/dParams into grad given dLoss/dOutput; must follow a
  // forward() on the same workspace.
  void backward(std::span<const double> d_output, MlpWorkspace& ws,
                std::span<double> grad) const;

  // Flat parameter offset of the weight row / bias for output unit `unit` of
  // the final layer (used to pin the sigma head at init).
  std::size_t final_layer_weight_offset(int unit) const;
  std::size_t final_layer_bias_offset(int unit) const;

 private:
  MlpSpec spec_;
  std::vector<double> params_;
};

// Adam / plain SGD over a flat parameter vector.
enum class OptimizerKind { Sgd, Adam };

OptimizerKind optimizer_from_string(const std::string& s);

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::size_t n, double lr);
  void apply(std::span<double> params, std::span<const double> grad);

 private:
  OptimizerKind kind_;
  double lr_;
  long step_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace tnav
