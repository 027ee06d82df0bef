#include "imbreg/learner.hpp"

namespace imbreg {

const char* loss_name(Loss loss) noexcept {
  return loss == Loss::MeanAbsoluteError ? "mae" : "bce";
}

Loss loss_from_name(const std::string& name) {
  if (name == "mae") return Loss::MeanAbsoluteError;
  if (name == "bce") return Loss::BinaryCrossEntropy;
  throw UsageError("unknown loss '" + name + "' (expected mae or bce)");
}

void MlpConfig::validate() const {
  if (input_dim < 1) throw UsageError("network input dimension must be at least 1");
  for (auto h : hidden)
    if (h < 1) throw UsageError("hidden layers need at least one unit");
  // A zero rate is accepted and freezes the parameters.
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw UsageError("learning rate must be finite and non-negative");
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (batch_size < 1) throw UsageError("batch size must be at least 1");
}

FeatureScaler FeatureScaler::fit(const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.rows() == 0) throw UsageError("cannot fit a scaler on no rows");
  FeatureScaler s;
  s.mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - s.mean;
  s.scale = (centered.colwise().squaredNorm() / static_cast<double>(X.rows())).cwiseSqrt();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j)
    if (!(s.scale[j] > 0.0)) s.scale[j] = 1.0;
  return s;
}

Eigen::MatrixXd FeatureScaler::transform(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (X.cols() != mean.size()) throw UsageError("scaler fitted on a different feature count");
  return (X.rowwise() - mean).array().rowwise() / scale.array();
}

}  // namespace imbreg
