#include "topcap/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "topcap/error.hpp"
#include "topcap/rng.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

std::size_t Dataset::count(Voicing v) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [v](const auto& r) { return r.label == v; }));
}

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw InvalidArgument("test fraction must lie strictly between 0 and 1");
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
}

namespace {

std::vector<std::size_t> indices_of(const Dataset& d, Voicing v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.records.size(); ++i)
    if (d.records[i].label == v) out.push_back(i);
  return out;
}

Dataset gather(const Dataset& d, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  Dataset out;
  out.records.reserve(idx.size());
  for (auto i : idx) out.records.push_back(d.records[i]);
  return out;
}

}  // namespace

Split split_stratified(const Dataset& dataset, const SplitSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<std::size_t> train, test;
  for (Voicing v : {Voicing::voiced, Voicing::voiceless}) {
    auto idx = indices_of(dataset, v);
    if (idx.size() < 2)
      throw InsufficientData("class '" + std::string(to_string(v)) + "' needs at least 2 records");
    shuffle(idx, rng);
    // nearbyint honours the default round-to-nearest-even mode.
    auto n_test = static_cast<std::size_t>(std::nearbyint(static_cast<double>(idx.size()) * spec.test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    test.insert(test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  return {gather(dataset, std::move(train)), gather(dataset, std::move(test))};
}

RocCurve roc_auc(std::span<const double> scores, std::span<const Voicing> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("score and label counts differ");
  std::size_t pos = 0;
  for (auto l : labels) pos += l == Voicing::voiced ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw InsufficientData("ROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double area = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    const std::size_t prev_tp = tp, prev_fp = fp;
    while (k < order.size() && scores[order[k]] == s) {
      if (labels[order[k]] == Voicing::voiced)
        ++tp;
      else
        ++fp;
      ++k;
    }
    // Trapezoid in count space, normalised at the end.
    area += static_cast<double>(fp - prev_fp) * static_cast<double>(tp + prev_tp) / 2.0;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  curve.auc = area / (static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

EvalReport score_holdout(const Dataset& train, const Dataset& test, ModelKind kind,
                         const ModelOptions& opts) {
  Model model(kind, opts);
  model.fit(train.records);

  EvalReport report;
  report.model = std::string(to_string(kind));
  report.n_train = train.records.size();
  report.n_test = test.records.size();
  std::vector<double> scores;
  std::vector<Voicing> labels;
  std::size_t correct = 0;
  for (const auto& r : test.records) {
    const double s = model.score(r);
    const Voicing predicted = s >= 0.5 ? Voicing::voiced : Voicing::voiceless;
    scores.push_back(s);
    labels.push_back(r.label);
    if (predicted == r.label) ++correct;
    if (r.label == Voicing::voiced)
      ++(predicted == Voicing::voiced ? report.confusion.true_voiced : report.confusion.false_voiceless);
    else
      ++(predicted == Voicing::voiced ? report.confusion.false_voiced : report.confusion.true_voiceless);
  }
  if (test.records.empty()) throw InsufficientData("empty evaluation set");
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.records.size());
  const auto curve = roc_auc(scores, labels);
  report.roc = curve.points;
  report.auc = curve.auc;
  report.warnings = model.warnings();
  return report;
}

CrossValidation kfold_cv(const Dataset& dataset, const SplitSpec& spec, ModelKind kind,
                         const ModelOptions& opts) {
  spec.validate();
  const std::size_t smaller = std::min(dataset.count(Voicing::voiced), dataset.count(Voicing::voiceless));
  if (spec.folds > smaller)
    throw InsufficientData(std::to_string(spec.folds) + " folds but the smaller class has " +
                           std::to_string(smaller) + " records");

  Rng rng(spec.seed ^ 0x9E3779B97F4A7C15ull);
  std::vector<std::size_t> fold_of(dataset.records.size());
  for (Voicing v : {Voicing::voiced, Voicing::voiceless}) {
    auto idx = indices_of(dataset, v);
    shuffle(idx, rng);
    for (std::size_t k = 0; k < idx.size(); ++k) fold_of[idx[k]] = k % spec.folds;
  }

  CrossValidation cv;
  double sum = 0.0;
  for (std::size_t f = 0; f < spec.folds; ++f) {
    Dataset train, held;
    for (std::size_t i = 0; i < dataset.records.size(); ++i)
      (fold_of[i] == f ? held : train).records.push_back(dataset.records[i]);
    auto report = score_holdout(train, held, kind, opts);
    report.split = spec;
    sum += report.accuracy;
    cv.folds.push_back(std::move(report));
  }
  cv.mean_accuracy = sum / static_cast<double>(spec.folds);
  return cv;
}

EvalReport evaluate(const Dataset& dataset, const SplitSpec& spec, ModelKind kind,
                    const ModelOptions& opts) {
  const auto split = split_stratified(dataset, spec);
  const auto cv = kfold_cv(split.train, spec, kind, opts);
  auto report = score_holdout(split.train, split.test, kind, opts);
  report.split = spec;
  for (const auto& f : cv.folds) report.fold_accuracies.push_back(f.accuracy);
  report.mean_cv_accuracy = cv.mean_accuracy;
  return report;
}

std::string format_report_json(const EvalReport& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["accuracy"] = r.accuracy;
  j["auc"] = r.auc;
  nlohmann::json roc = nlohmann::json::array();
  for (const auto& p : r.roc) roc.push_back(nlohmann::json::array({p.fpr, p.tpr}));
  j["roc"] = roc;
  j["confusion"] = {{"true_voiced", r.confusion.true_voiced},
                    {"false_voiced", r.confusion.false_voiced},
                    {"true_voiceless", r.confusion.true_voiceless},
                    {"false_voiceless", r.confusion.false_voiceless}};
  j["cross_validation"] = {{"fold_accuracies", r.fold_accuracies}, {"mean_accuracy", r.mean_cv_accuracy}};
  j["split"] = {{"n_train", r.n_train},
                {"n_test", r.n_test},
                {"test_fraction", r.split.test_fraction},
                {"folds", r.split.folds},
                {"seed", r.split.seed}};
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string format_roc_csv(std::span<const RocPoint> roc) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : roc) out += format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
  return out;
}

std::string format_summary_csv(std::span<const EvalReport> reports) {
  std::string out = "model,accuracy,auc\n";
  for (const auto& r : reports) out += r.model + "," + format_double(r.accuracy) + "," + format_double(r.auc) + "\n";
  return out;
}

}  // namespace topcap
