#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tnav/dataset.hpp"
#include "tnav/mlp.hpp"
#include "tnav/patch.hpp"

namespace tnav {

// Patch -> Gaussian regressor shape. The network maps the mean-centered,
// scaled patch to 2k outputs: k means then k raw log-sigmas; sigma is
// sigma_floor + exp(raw), strictly positive by construction.
struct RegressorSpec {
  int patch_cells = 24;
  std::vector<int> hidden = {128, 64};
  int k = 2;  // 2 for velocity discrepancy, 4 for pose discrepancy
  Activation act = Activation::Tanh;
  double sigma_floor = 1e-3;
  double input_scale = 0.25;  // global height scale, meters

  int input_size() const { return patch_cells * patch_cells; }
  void validate() const;
};

struct GaussianPrediction {
  std::vector<double> mu;
  std::vector<double> sigma;
};

class Regressor {
 public:
  Regressor() = default;
  Regressor(RegressorSpec spec, Mlp net);

  // Deterministic initialization; the sigma-head rows start at zero so every
  // initial sigma is sigma_floor + 1.
  static Regressor init(const RegressorSpec& spec, std::uint64_t seed);

  const RegressorSpec& spec() const { return spec_; }
  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }

  GaussianPrediction forward(const TerrainPatch& patch) const;
  // Raw-sample variant used on dataset rows (patch_cells^2 floats).
  GaussianPrediction forward_cells(std::span<const float> cells) const;

 private:
  template <typename T>
  void normalize(std::span<const T> cells, std::vector<double>& out) const;
  GaussianPrediction forward_normalized(std::span<const double> input, MlpWorkspace& ws) const;

  RegressorSpec spec_;
  Mlp net_;

  friend double nll_with_gradient(const Regressor& reg, std::span<const float> cells,
                                  std::span<const float> target, std::span<double> grad,
                                  MlpWorkspace& ws);
};

// Per-component 1/2 (log sigma^2 + (mu - target)^2 / sigma^2), summed over
// components. Throws NumericError on non-finite inputs.
double nll_value(std::span<const double> mu, std::span<const double> sigma,
                 std::span<const float> target);

// Loss plus accumulated parameter gradient for one sample (reverse-mode
// through the network).
double nll_with_gradient(const Regressor& reg, std::span<const float> cells,
                         std::span<const float> target, std::span<double> grad, MlpWorkspace& ws);

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 30;
  std::uint64_t seed = 1;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double validation_fraction = 0.2;

  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_nll;  // per-sample mean, one entry per epoch
  std::vector<double> val_nll;    // empty entries mirrored from train when no split
  int best_epoch = -1;
};

// Minibatch training with a deterministic shuffle and validation split;
// restores the best-validation parameter snapshot before returning.
// Throws SpecError on an empty dataset or a record-kind/k mismatch.
TrainHistory train_regressor(Regressor& reg, const Dataset& data, const TrainConfig& cfg);

// Mean per-sample NLL of `reg` over the dataset rows in `indices`.
double dataset_nll(const Regressor& reg, const Dataset& data,
                   std::span<const std::size_t> indices);

// Mean per-sample NLL of the constant Gaussian baseline (componentwise
// mean/sigma of the rows in `fit`) evaluated on the rows in `eval`.
double constant_baseline_nll(const Dataset& data, std::span<const std::size_t> fit,
                             std::span<const std::size_t> eval, double sigma_floor = 1e-3);

// Central-difference gradient verification over all parameters; returns the
// maximum relative error. epsilon must lie in [1e-7, 1e-3].
double grad_check(const Regressor& reg, std::span<const float> cells,
                  std::span<const float> target, double epsilon);

// TNTM model file: magic "TNTM", u16 version, architecture descriptor,
// f64 parameter array.
void write_regressor(const Regressor& reg, const std::string& path);
Regressor read_regressor(const std::string& path);

// Loss history CSV: header then epoch,train_nll,val_nll rows.
void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace tnav
