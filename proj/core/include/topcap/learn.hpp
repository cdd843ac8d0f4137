#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topcap/classifiers.hpp"
#include "topcap/features.hpp"

namespace topcap {

struct Dataset {
  std::vector<FeatureRecord> records;

  std::size_t count(Voicing v) const noexcept;
};

struct SplitSpec {
  double test_fraction = 0.3;
  std::size_t folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Per-class seeded shuffle; each class contributes round-half-even(count *
/// test_fraction) records to the test set, clamped to [1, count - 1]. Both
/// halves keep the input order. Throws InsufficientData when a class has
/// fewer than 2 records.
Split split_stratified(const Dataset& dataset, const SplitSpec& spec);

struct RocPoint {
  double fpr;
  double tpr;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1)
  double auc = 0.0;
};

/// Threshold sweep over distinct scores, highest first; tied scores move
/// together, so AUC by trapezoid equals the Mann-Whitney concordance with
/// half credit for ties. Voiced is the positive class.
RocCurve roc_auc(std::span<const double> scores, std::span<const Voicing> labels);

struct Confusion {
  std::size_t true_voiced = 0;      // voiced predicted voiced
  std::size_t false_voiced = 0;     // voiceless predicted voiced
  std::size_t true_voiceless = 0;
  std::size_t false_voiceless = 0;  // voiced predicted voiceless
};

struct EvalReport {
  std::string model;
  double accuracy = 0.0;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  Confusion confusion;
  std::vector<double> fold_accuracies;
  double mean_cv_accuracy = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  SplitSpec split;
  std::vector<std::string> warnings;
};

/// Fits `model` on train and scores test.
EvalReport score_holdout(const Dataset& train, const Dataset& test, ModelKind kind,
                         const ModelOptions& opts = {});

struct CrossValidation {
  std::vector<EvalReport> folds;
  double mean_accuracy = 0.0;
};

/// Stratified k-fold: each class is shuffled with the seed and dealt round
/// robin into spec.folds folds. Throws InsufficientData when folds exceeds
/// the smaller class count.
CrossValidation kfold_cv(const Dataset& dataset, const SplitSpec& spec, ModelKind kind,
                         const ModelOptions& opts = {});

/// Holdout split, k-fold CV on the training part, then a final fit on the
/// whole training part evaluated on the holdout.
EvalReport evaluate(const Dataset& dataset, const SplitSpec& spec, ModelKind kind,
                    const ModelOptions& opts = {});

std::string format_report_json(const EvalReport& report);
std::string format_roc_csv(std::span<const RocPoint> roc);
std::string format_summary_csv(std::span<const EvalReport> reports);

}  // namespace topcap
