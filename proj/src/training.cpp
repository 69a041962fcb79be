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

#include "lunadtn/training.hpp"

#include <cmath>

#include "lunadtn/reports.hpp"
#include "lunadtn/rng.hpp"
#include "text.hpp"

namespace lunadtn {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) throw ShapeError("a model needs at least an input and an output width");
  for (auto d : dims) {
    if (d == 0) throw ShapeError("layer widths must be positive");
  }
}

template <typename Dense>
std::span<double> flat(Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Dense>
std::span<const double> flat(const Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

MlpModel::MlpModel(std::vector<std::size_t> dims, std::vector<Eigen::MatrixXd> weights,
                   std::vector<Eigen::VectorXd> biases)
    : dims_(std::move(dims)), weights_(std::move(weights)), biases_(std::move(biases)) {
  check_dims(dims_);
  const std::size_t layers = dims_.size() - 1;
  if (weights_.size() != layers || biases_.size() != layers)
    throw ShapeError("expected " + std::to_string(layers) + " layers of parameters");
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<Eigen::Index>(dims_[l + 1]);
    const auto cols = static_cast<Eigen::Index>(dims_[l]);
    if (weights_[l].rows() != rows || weights_[l].cols() != cols)
      throw ShapeError("layer " + std::to_string(l + 1) + " weight shape mismatch");
    if (biases_[l].size() != rows)
      throw ShapeError("layer " + std::to_string(l + 1) + " bias shape mismatch");
  }
}

MlpModel MlpModel::zeros(std::vector<std::size_t> dims) {
  check_dims(dims);
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    w.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims[l + 1]),
                                      static_cast<Eigen::Index>(dims[l])));
    b.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims[l + 1])));
  }
  return MlpModel(std::move(dims), std::move(w), std::move(b));
}

MlpModel MlpModel::random_uniform(std::vector<std::size_t> dims, Rng& rng) {
  MlpModel model = zeros(std::move(dims));
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(model.dims_[l]));
    // Row-major draw order so the values do not depend on Eigen's storage order.
    auto& w = model.weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-bound, bound);
    for (Eigen::Index r = 0; r < model.biases_[l].size(); ++r)
      model.biases_[l](r) = rng.uniform(-bound, bound);
  }
  return model;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l)
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  return n;
}

Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (static_cast<std::size_t>(inputs.rows()) != model.input_dim())
    throw ShapeError("input has " + std::to_string(inputs.rows()) + " features, model expects " +
                     std::to_string(model.input_dim()));
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    Eigen::MatrixXd z = model.weight(l) * a;
    z.colwise() += model.bias(l);
    if (l + 1 < model.layer_count()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd mlp_forward(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim())
    throw ShapeError("input has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(model.input_dim()));
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    Eigen::VectorXd z = model.weight(l) * a + model.bias(l);
    if (l + 1 < model.layer_count()) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) throw ShapeError("mse of an empty vector");
  if (predictions.size() != targets.size()) throw ShapeError("mse operands differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

Batch make_batch(std::span<const TrainingSample> samples) {
  Batch b;
  const auto n = static_cast<Eigen::Index>(samples.size());
  b.inputs.resize(4, n);
  b.targets.resize(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < 4; ++k) b.inputs(k, i) = s.features[static_cast<std::size_t>(k)];
    b.targets(0, i) = s.label;
  }
  return b;
}

Gradients mlp_gradients(const MlpModel& model, const Batch& batch) {
  const std::size_t layers = model.layer_count();
  if (batch.inputs.cols() == 0) throw ShapeError("empty batch");
  if (static_cast<std::size_t>(batch.inputs.rows()) != model.input_dim() ||
      static_cast<std::size_t>(batch.targets.rows()) != model.output_dim() ||
      batch.targets.cols() != batch.inputs.cols())
    throw ShapeError("batch shape does not match the model");

  // activations[0] is the input; preacts[l] feeds activations[l + 1].
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  std::vector<Eigen::MatrixXd> preacts(layers);
  activations[0] = batch.inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    preacts[l].noalias() = model.weight(l) * activations[l];
    preacts[l].colwise() += model.bias(l);
    activations[l + 1] = (l + 1 < layers) ? Eigen::MatrixXd(preacts[l].cwiseMax(0.0)) : preacts[l];
  }

  const Eigen::MatrixXd diff = activations[layers] - batch.targets;
  const double count = static_cast<double>(diff.size());
  Gradients g;
  g.loss = diff.squaredNorm() / count;
  g.weights.resize(layers);
  g.biases.resize(layers);

  Eigen::MatrixXd delta = diff * (2.0 / count);
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l].noalias() = delta * activations[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd back = model.weight(l).transpose() * delta;
    delta = back.cwiseProduct((preacts[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return g;
}

void validate_train_config(const TrainConfig& cfg) {
  if (!(cfg.learningRate > 0.0)) throw ValidationError("learningRate must be > 0");
  if (cfg.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw ValidationError("Adam betas must lie in [0, 1)");
  if (!(cfg.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  check_dims(cfg.dims);
  if (cfg.dims.front() != 4 || cfg.dims.back() != 1)
    throw ShapeError("the next-hop regressor maps 4 features to 1 output");
}

AdamState AdamState::for_model(const MlpModel& model) {
  AdamState s;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const auto& w = model.weight(l);
    s.mWeights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    s.vWeights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    s.mBiases.push_back(Eigen::VectorXd::Zero(model.bias(l).size()));
    s.vBiases.push_back(Eigen::VectorXd::Zero(model.bias(l).size()));
  }
  return s;
}

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::uint64_t step, const TrainConfig& cfg) {
  if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size())
    throw ShapeError("Adam operands differ in size");
  const double t = static_cast<double>(step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    params[i] -= cfg.learningRate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, const TrainConfig& cfg) {
  if (grads.weights.size() != model.layer_count() || state.mWeights.size() != model.layer_count())
    throw ShapeError("gradients or optimizer state do not match the model");
  ++state.step;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    adam_update(flat(model.weight(l)), flat(grads.weights[l]), flat(state.mWeights[l]),
                flat(state.vWeights[l]), state.step, cfg);
    adam_update(flat(model.bias(l)), flat(grads.biases[l]), flat(state.mBiases[l]),
                flat(state.vBiases[l]), state.step, cfg);
  }
}

TrainingDiverged::TrainingDiverged(std::size_t epoch)
    : Error("training diverged: non-finite loss at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

TrainResult train(std::span<const TrainingSample> dataset, const TrainConfig& cfg,
                  const TrainProgress& progress) {
  validate_train_config(cfg);
  if (dataset.empty()) throw ValidationError("empty dataset");

  Batch batch = make_batch(dataset);
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(4);
  if (cfg.normalize) {
    lo = batch.inputs.rowwise().minCoeff();
    Eigen::VectorXd range = batch.inputs.rowwise().maxCoeff() - lo;
    for (Eigen::Index k = 0; k < 4; ++k) scale(k) = range(k) > 0.0 ? 1.0 / range(k) : 1.0;
    batch.inputs = ((batch.inputs.colwise() - lo).array().colwise() * scale.array()).matrix();
  }

  Rng rng(cfg.seed);
  TrainResult result{MlpModel::random_uniform(cfg.dims, rng), {}};
  result.lossCurve.reserve(cfg.epochs);
  AdamState state = AdamState::for_model(result.model);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Gradients g = mlp_gradients(result.model, batch);
    if (!std::isfinite(g.loss)) throw TrainingDiverged(epoch);
    result.lossCurve.push_back(g.loss);
    if (progress) progress(epoch, g.loss);
    adam_step(result.model, g, state, cfg);
  }

  if (cfg.normalize) {
    // W' x + b' == W ((x - lo) * scale) + b
    Eigen::MatrixXd& w = result.model.weight(0);
    Eigen::VectorXd& b = result.model.bias(0);
    b -= w * lo.cwiseProduct(scale);
    w = w * scale.asDiagonal();
  }
  return result;
}

std::vector<TrainingSample> build_dataset(std::string_view reportText, double epochDuration) {
  std::vector<TrainingSample> out;
  for (const auto& rec : parse_nn_trainer_report(reportText)) {
    const double epoch = static_cast<double>(epoch_of(rec.creationTime, epochDuration));
    const double from = node_numeric_id(rec.path.front()).value;
    const double to = node_numeric_id(rec.path.back()).value;
    for (std::size_t i = 0; i + 1 < rec.path.size(); ++i) {
      const double current = node_numeric_id(rec.path[i]).value;
      const double next = node_numeric_id(rec.path[i + 1]).value;
      out.push_back({{epoch, from, to, current}, next});
    }
  }
  return out;
}

std::vector<TrainingSample> load_dataset_from_report(const std::filesystem::path& reportFile,
                                                     double epochDuration) {
  return build_dataset(text::read_file(reportFile), epochDuration);
}

std::string format_model(const MlpModel& model) {
  std::string out = "NLMODEL 1\ndims";
  for (auto d : model.dims()) out += ' ' + std::to_string(d);
  out += '\n';
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const auto& w = model.weight(l);
    out += "W " + std::to_string(l + 1) + ' ' + std::to_string(w.rows()) + ' ' +
           std::to_string(w.cols()) + '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        if (c) out += ' ';
        out += text::format_exact(w(r, c));
      }
      out += '\n';
    }
    const auto& b = model.bias(l);
    out += "B " + std::to_string(l + 1) + ' ' + std::to_string(b.size()) + '\n';
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      if (r) out += ' ';
      out += text::format_exact(b(r));
    }
    out += '\n';
  }
  return out;
}

namespace {

class ModelReader {
 public:
  explicit ModelReader(std::string_view content) : lines_(text::lines(content)) {}

  std::pair<std::size_t, std::vector<std::string_view>> next(std::string_view expecting) {
    while (pos_ < lines_.size()) {
      auto [n, raw] = lines_[pos_++];
      auto line = text::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      return {n, text::split_ws(line)};
    }
    throw ParseError("model file truncated: expected " + std::string(expecting));
  }

  bool at_end() {
    while (pos_ < lines_.size()) {
      auto line = text::trim(lines_[pos_].second);
      if (!line.empty() && line.front() != '#') return false;
      ++pos_;
    }
    return true;
  }

 private:
  std::vector<std::pair<std::size_t, std::string_view>> lines_;
  std::size_t pos_ = 0;
};

double parse_param(std::string_view s, std::size_t n) {
  double v = 0.0;
  if (!text::try_double(s, v)) throw ParseError("invalid parameter '" + std::string(s) + "'", n);
  if (!std::isfinite(v)) throw ValidationError("line " + std::to_string(n) + ": non-finite parameter");
  return v;
}

}  // namespace

MlpModel parse_model(std::string_view content) {
  ModelReader in(content);
  auto [n0, magic] = in.next("NLMODEL header");
  if (magic.size() != 2 || magic[0] != "NLMODEL") throw ParseError("not a model file", n0);
  if (magic[1] != "1")
    throw ParseError("unsupported model version " + std::string(magic[1]), n0);

  auto [n1, dimsLine] = in.next("dims line");
  if (dimsLine.size() < 3 || dimsLine[0] != "dims") throw ParseError("expected 'dims d0 ... dL'", n1);
  std::vector<std::size_t> dims;
  for (std::size_t i = 1; i < dimsLine.size(); ++i)
    dims.push_back(text::parse_int<std::size_t>(dimsLine[i], n1, "layer width"));
  check_dims(dims);

  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  for (std::size_t l = 1; l < dims.size(); ++l) {
    const std::string layer = std::to_string(l);
    auto [nw, wh] = in.next("W header for layer " + layer);
    if (wh.size() != 4 || wh[0] != "W" || wh[1] != layer)
      throw ParseError("expected 'W " + layer + " rows cols'", nw);
    const auto rows = text::parse_int<std::size_t>(wh[2], nw, "rows");
    const auto cols = text::parse_int<std::size_t>(wh[3], nw, "cols");
    if (rows != dims[l] || cols != dims[l - 1])
      throw ShapeError("layer " + layer + " declares " + std::to_string(rows) + "x" +
                       std::to_string(cols) + " weights, dims require " +
                       std::to_string(dims[l]) + "x" + std::to_string(dims[l - 1]));
    Eigen::MatrixXd w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      auto [nr, vals] = in.next("weight row");
      if (vals.size() != cols)
        throw ShapeError("line " + std::to_string(nr) + ": layer " + layer + " weight row has " +
                         std::to_string(vals.size()) + " values, expected " + std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c)
        w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_param(vals[c], nr);
    }
    auto [nb, bh] = in.next("B header for layer " + layer);
    if (bh.size() != 3 || bh[0] != "B" || bh[1] != layer)
      throw ShapeError("line " + std::to_string(nb) + ": expected 'B " + layer +
                       " rows' after " + std::to_string(rows) + " weight rows");
    const auto brows = text::parse_int<std::size_t>(bh[2], nb, "rows");
    if (brows != dims[l]) throw ShapeError("layer " + layer + " bias length mismatch");
    auto [nv, vals] = in.next("bias values");
    if (vals.size() != brows)
      throw ShapeError("line " + std::to_string(nv) + ": layer " + layer + " bias has " +
                       std::to_string(vals.size()) + " values, expected " + std::to_string(brows));
    Eigen::VectorXd b(static_cast<Eigen::Index>(brows));
    for (std::size_t r = 0; r < brows; ++r) b(static_cast<Eigen::Index>(r)) = parse_param(vals[r], nv);
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  if (!in.at_end()) throw ParseError("trailing content after the last layer");
  return MlpModel(std::move(dims), std::move(weights), std::move(biases));
}

void save_model(const MlpModel& model, const std::filesystem::path& file) {
  text::write_file(file, format_model(model));
}

MlpModel load_model(const std::filesystem::path& file) {
  return parse_model(text::read_file(file));
}

}  // namespace lunadtn
