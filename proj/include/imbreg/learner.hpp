#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "imbreg/error.hpp"
#include "imbreg/random.hpp"

namespace imbreg {

enum class Loss { MeanAbsoluteError, BinaryCrossEntropy };

const char* loss_name(Loss loss) noexcept;
Loss loss_from_name(const std::string& name);

/// Fully connected ReLU network with one output. The default hidden layout is
/// three layers of twenty units.
struct MlpConfig {
  std::size_t input_dim = 4;
  std::vector<std::size_t> hidden{20, 20, 20};
  Loss loss = Loss::MeanAbsoluteError;
  double learning_rate = 1e-3;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

template <typename Scalar>
class Mlp {
public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Layer {
    Mat weights;  // fan_out x fan_in
    Vec bias;     // fan_out
  };

  Mlp(std::vector<Layer> layers, Loss loss) : layers_(std::move(layers)), loss_(loss) {
    if (layers_.empty()) throw UsageError("network needs at least one layer");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (layers_[l].bias.size() != layers_[l].weights.rows())
        throw UsageError("layer bias does not match its weight rows");
      if (l > 0 && layers_[l].weights.cols() != layers_[l - 1].weights.rows())
        throw UsageError("consecutive layer shapes do not chain");
    }
    if (layers_.back().weights.rows() != 1) throw UsageError("network output must be scalar");
  }

  /// Weights ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), biases zero.
  static Mlp init(const MlpConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(derive_seed(seed, 0));
    std::vector<std::size_t> sizes{config.input_dim};
    sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
    sizes.push_back(1);
    std::vector<Layer> layers;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
      const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
      const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
      Layer layer{Mat(fan_out, fan_in), Vec::Zero(fan_out)};
      for (Eigen::Index r = 0; r < fan_out; ++r)
        for (Eigen::Index c = 0; c < fan_in; ++c)
          layer.weights(r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
      layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers), config.loss);
  }

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }
  Loss loss() const noexcept { return loss_; }
  Eigen::Index input_dim() const noexcept { return layers_.front().weights.cols(); }

  std::size_t parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& layer : layers_)
      n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
    return n;
  }

  /// Pre-activation of the output unit for each row of X.
  Vec logits(const Eigen::Ref<const Mat>& X) const {
    check_dim(X.cols());
    Mat a = X;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      Mat z = (a * layers_[l].weights.transpose()).rowwise() + layers_[l].bias.transpose();
      a = (l + 1 < layers_.size()) ? Mat(z.cwiseMax(Scalar(0))) : std::move(z);
    }
    return a.col(0);
  }

  /// Row-wise outputs: raw values for regression, probabilities for
  /// classification.
  Vec predict(const Eigen::Ref<const Mat>& X) const {
    Vec z = logits(X);
    if (loss_ == Loss::BinaryCrossEntropy)
      z = z.unaryExpr([](Scalar v) { return sigmoid(v); });
    return z;
  }

  Scalar forward(const Eigen::Ref<const Vec>& x) const {
    return predict(Mat(x.transpose()))[0];
  }

  static Scalar sigmoid(Scalar z) {
    return z >= Scalar(0) ? Scalar(1) / (Scalar(1) + std::exp(-z))
                          : std::exp(z) / (Scalar(1) + std::exp(z));
  }

private:
  void check_dim(Eigen::Index cols) const {
    if (cols != input_dim())
      throw UsageError("input has " + std::to_string(cols) + " features, network expects " +
                       std::to_string(input_dim()));
  }

  std::vector<Layer> layers_;
  Loss loss_;
};

/// Gradient of the mean batch loss, shaped like the network's layers.
template <typename Scalar>
struct Gradients {
  std::vector<typename Mlp<Scalar>::Mat> weights;
  std::vector<typename Mlp<Scalar>::Vec> bias;
};

/// Mean loss over the rows of X and, if `grad` is given, its gradient.
/// MAE uses sign(0) = 0; BCE is evaluated on logits in the overflow-safe form
/// max(z, 0) - z y + log(1 + exp(-|z|)). ReLU'(0) is taken as 0.
template <typename Scalar>
Scalar loss_and_gradient(const Mlp<Scalar>& net, const Eigen::Ref<const typename Mlp<Scalar>::Mat>& X,
                         const Eigen::Ref<const typename Mlp<Scalar>::Vec>& y,
                         Gradients<Scalar>* grad) {
  using Mat = typename Mlp<Scalar>::Mat;
  const auto& layers = net.layers();
  const std::size_t depth = layers.size();
  if (X.cols() != net.input_dim()) throw UsageError("input dimension mismatch");
  if (X.rows() != y.size() || X.rows() == 0) throw UsageError("batch rows and targets differ");
  const Scalar n = static_cast<Scalar>(X.rows());

  // activations[0] = X, pre[l] = pre-activation of layer l
  std::vector<Mat> activations(depth + 1);
  std::vector<Mat> pre(depth);
  activations[0] = X;
  for (std::size_t l = 0; l < depth; ++l) {
    pre[l] = (activations[l] * layers[l].weights.transpose()).rowwise() + layers[l].bias.transpose();
    activations[l + 1] = (l + 1 < depth) ? Mat(pre[l].cwiseMax(Scalar(0))) : pre[l];
  }
  const auto out = activations[depth].col(0);

  Scalar loss(0);
  Mat delta(X.rows(), 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Scalar z = out[i];
    if (net.loss() == Loss::MeanAbsoluteError) {
      const Scalar r = z - y[i];
      loss += std::abs(r);
      delta(i, 0) = (r > Scalar(0) ? Scalar(1) : (r < Scalar(0) ? Scalar(-1) : Scalar(0))) / n;
    } else {
      loss += std::max(z, Scalar(0)) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
      delta(i, 0) = (Mlp<Scalar>::sigmoid(z) - y[i]) / n;
    }
  }
  loss /= n;
  if (!grad) return loss;

  grad->weights.resize(depth);
  grad->bias.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    grad->weights[l] = delta.transpose() * activations[l];
    grad->bias[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Mat back = delta * layers[l].weights;
      delta = back.cwiseProduct(
          pre[l - 1].unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); }));
    }
  }
  return loss;
}

/// Adam state (beta1 0.9, beta2 0.999, eps 1e-8).
template <typename Scalar>
class Adam {
public:
  Adam(const Mlp<Scalar>& net, double learning_rate) : lr_(learning_rate) {
    for (const auto& layer : net.layers()) {
      m_w_.push_back(Mlp<Scalar>::Mat::Zero(layer.weights.rows(), layer.weights.cols()));
      v_w_.push_back(m_w_.back());
      m_b_.push_back(Mlp<Scalar>::Vec::Zero(layer.bias.size()));
      v_b_.push_back(m_b_.back());
    }
  }

  void step(Mlp<Scalar>& net, const Gradients<Scalar>& g) {
    ++t_;
    const Scalar b1(0.9), b2(0.999), eps(1e-8);
    const Scalar c1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(t_));
    const Scalar c2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(t_));
    const Scalar lr = static_cast<Scalar>(lr_);
    auto update = [&](auto& param, auto& m, auto& v, const auto& gr) {
      m = b1 * m + (Scalar(1) - b1) * gr;
      v = b2 * v + (Scalar(1) - b2) * gr.cwiseProduct(gr);
      param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      update(layers[l].weights, m_w_[l], v_w_[l], g.weights[l]);
      update(layers[l].bias, m_b_[l], v_b_[l], g.bias[l]);
    }
  }

private:
  double lr_;
  long t_ = 0;
  std::vector<typename Mlp<Scalar>::Mat> m_w_, v_w_;
  std::vector<typename Mlp<Scalar>::Vec> m_b_, v_b_;
};

template <typename Scalar>
struct TrainResult {
  Mlp<Scalar> model;
  std::vector<double> loss_history;  // mean training loss per epoch
};

/// Mini-batch Adam. Rows are reshuffled every epoch from a stream derived from
/// config.seed. Throws TrainingError on a non-finite loss.
template <typename Scalar>
TrainResult<Scalar> train(Mlp<Scalar> net, const Eigen::Ref<const typename Mlp<Scalar>::Mat>& X,
                          const Eigen::Ref<const typename Mlp<Scalar>::Vec>& y,
                          const MlpConfig& config) {
  using Mat = typename Mlp<Scalar>::Mat;
  using Vec = typename Mlp<Scalar>::Vec;
  config.validate();
  if (X.rows() == 0) throw UsageError("training data is empty");
  if (X.rows() != y.size()) throw UsageError("training rows and targets differ");
  if (X.cols() != net.input_dim()) throw UsageError("training features do not match the network");

  const auto n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(config.seed, 1));
  Adam<Scalar> adam(net, config.learning_rate);
  Gradients<Scalar> grad;
  Mat xb;
  Vec yb;
  std::vector<double> history;
  history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const auto rows = static_cast<Eigen::Index>(stop - start);
      xb.resize(rows, X.cols());
      yb.resize(rows);
      for (Eigen::Index k = 0; k < rows; ++k) {
        const auto r = static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(k)]);
        xb.row(k) = X.row(r);
        yb[k] = y[r];
      }
      const Scalar loss = loss_and_gradient(net, xb, yb, &grad);
      if (!std::isfinite(static_cast<double>(loss)))
        throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch) +
                            ", batch starting at row " + std::to_string(start));
      epoch_loss += static_cast<double>(loss) * static_cast<double>(rows);
      adam.step(net, grad);
    }
    history.push_back(epoch_loss / static_cast<double>(n));
  }
  return {std::move(net), std::move(history)};
}

/// Column-wise z-scoring fitted on training features. Constant columns keep
/// scale 1.
struct FeatureScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static FeatureScaler fit(const Eigen::Ref<const Eigen::MatrixXd>& X);
  Eigen::MatrixXd transform(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

}  // namespace imbreg
