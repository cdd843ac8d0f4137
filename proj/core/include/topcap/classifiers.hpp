#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topcap/features.hpp"

namespace topcap {

using FeatureVector = std::array<double, 2>;  // (birth, lifetime)

enum class ModelKind { knn, logistic, gaussian_nb, linear_svm };

std::string_view to_string(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view s);
inline constexpr std::array<ModelKind, 4> kAllModels = {ModelKind::knn, ModelKind::logistic,
                                                        ModelKind::gaussian_nb, ModelKind::linear_svm};

struct ModelOptions {
  std::size_t k = 5;         // neighbours for knn
  bool standardize = true;   // z-score with training statistics
};

/// Binary classifier over 2-feature vectors. Labels: 1 = voiced, 0 = voiceless.
/// score() is the confidence that the sample is voiced, in [0, 1].
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(std::span<const FeatureVector> x, std::span<const int> y) = 0;
  virtual double score(const FeatureVector& x) const = 0;
  virtual ModelKind kind() const noexcept = 0;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 protected:
  std::vector<std::string> warnings_;
};

std::unique_ptr<Classifier> make_classifier(ModelKind kind, const ModelOptions& opts = {});

/// z-score transform fitted once on training features; variances are floored
/// at 1e-9 with a warning.
class Standardizer {
 public:
  void fit(std::span<const FeatureVector> x);
  FeatureVector transform(const FeatureVector& x) const noexcept;
  const FeatureVector& mean() const noexcept { return mean_; }
  const FeatureVector& scale() const noexcept { return scale_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  FeatureVector mean_{0.0, 0.0};
  FeatureVector scale_{1.0, 1.0};
  std::vector<std::string> warnings_;
};

/// Standardizer plus classifier, trained on FeatureRecords.
class Model {
 public:
  Model(ModelKind kind, const ModelOptions& opts = {});

  void fit(std::span<const FeatureRecord> train);
  double score(const FeatureRecord& r) const;
  Voicing predict(const FeatureRecord& r) const;

  const Standardizer& scaler() const noexcept { return scaler_; }
  ModelKind kind() const noexcept { return classifier_->kind(); }
  std::vector<std::string> warnings() const;

 private:
  ModelOptions opts_;
  Standardizer scaler_;
  std::unique_ptr<Classifier> classifier_;
};

inline FeatureVector features_of(const FeatureRecord& r) noexcept { return {r.birth, r.lifetime}; }

}  // namespace topcap
