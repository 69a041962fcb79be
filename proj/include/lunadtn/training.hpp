// Copyright 2026 The lunadtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LUNADTN_TRAINING_HPP
#define LUNADTN_TRAINING_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lunadtn/core.hpp"

namespace lunadtn {

class Rng;

/// One supervised next-hop example.
/// features = [epoch, source id, destination id, current node id].
struct TrainingSample {
  std::array<double, 4> features{};
  double label = 0.0;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

/// Layer widths of the next-hop regressor: 4 -> 64 -> 512 -> 128 -> 6 -> 1.
inline const std::vector<std::size_t> kRoutingDims{4, 64, 512, 128, 6, 1};

/// Fully connected network. Rectifier after every layer except the last,
/// which is affine only. Layer indices are 0-based in the API.
class MlpModel {
 public:
  MlpModel() = default;
  /// Throws ShapeError if weight/bias shapes disagree with `dims`.
  MlpModel(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> weights,
           std::vector<Eigen::VectorXd> biases);

  static MlpModel zeros(std::vector<std::size_t> dims);
  /// Weights and biases uniform in +-1/sqrt(fan_in), layer by layer.
  static MlpModel random_uniform(std::vector<std::size_t> dims, Rng& rng);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t layer_count() const { return weights_.size(); }
  std::size_t input_dim() const { return dims_.empty() ? 0 : dims_.front(); }
  std::size_t output_dim() const { return dims_.empty() ? 0 : dims_.back(); }
  std::size_t parameter_count() const;

  const Eigen::MatrixXd& weight(std::size_t layer) const { return weights_.at(layer); }
  const Eigen::VectorXd& bias(std::size_t layer) const { return biases_.at(layer); }
  Eigen::MatrixXd& weight(std::size_t layer) { return weights_.at(layer); }
  Eigen::VectorXd& bias(std::size_t layer) { return biases_.at(layer); }

 private:
  std::vector<std::size_t> dims_;
  std::vector<Eigen::MatrixXd> weights_;  // out x in
  std::vector<Eigen::VectorXd> biases_;
};

Eigen::VectorXd mlp_forward(const MlpModel& model, std::span<const double> x);

/// Column-per-sample forward pass: inputs is dims[0] x n.
Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);

double mse(std::span<const double> predictions, std::span<const double> targets);

/// Column-per-sample training batch.
struct Batch {
  Eigen::MatrixXd inputs;   // d0 x n
  Eigen::MatrixXd targets;  // dL x n
};

Batch make_batch(std::span<const TrainingSample> samples);

/// Same shapes as the model parameters.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;  // batch MSE at the evaluated parameters
};

/// Exact reverse-mode gradients of the batch MSE (mean over samples and
/// outputs). The rectifier's derivative at exactly 0 is taken as 0.
Gradients mlp_gradients(const MlpModel& model, const Batch& batch);

struct TrainConfig {
  double learningRate = 0.007;
  std::size_t epochs = 70000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  std::vector<std::size_t> dims = kRoutingDims;
  // Min-max scale the features during training, folded back into the first
  // layer afterwards so the saved model still takes raw features.
  bool normalize = false;
};

void validate_train_config(const TrainConfig& cfg);

struct AdamState {
  std::vector<Eigen::MatrixXd> mWeights, vWeights;
  std::vector<Eigen::VectorXd> mBiases, vBiases;
  std::uint64_t step = 0;

  static AdamState for_model(const MlpModel& model);
};

/// One Adam update over flat spans; `step` is the already-incremented t.
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::uint64_t step, const TrainConfig& cfg);

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, const TrainConfig& cfg);

class TrainingDiverged : public Error {
 public:
  explicit TrainingDiverged(std::size_t epoch);
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> lossCurve;  // batch MSE before each epoch's update
};

using TrainProgress = std::function<void(std::size_t epoch, double loss)>;

/// Full-batch Adam. Deterministic for a given (dataset, cfg).
TrainResult train(std::span<const TrainingSample> dataset, const TrainConfig& cfg,
                  const TrainProgress& progress = {});

/// Splits every delivered path n0->...->nk into k (current, next hop) samples.
std::vector<TrainingSample> build_dataset(std::string_view reportText, double epochDuration);
std::vector<TrainingSample> load_dataset_from_report(const std::filesystem::path& reportFile,
                                                     double epochDuration);

std::string format_model(const MlpModel& model);
MlpModel parse_model(std::string_view text);
void save_model(const MlpModel& model, const std::filesystem::path& file);
MlpModel load_model(const std::filesystem::path& file);

}  // namespace lunadtn

#endif  // LUNADTN_TRAINING_HPP
