#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "topcap/classifiers.hpp"
#include "topcap/error.hpp"
#include "topcap/learn.hpp"
#include "topcap/rng.hpp"

using namespace topcap;

namespace {

constexpr auto V = Voicing::voiced;
constexpr auto U = Voicing::voiceless;

Dataset make_dataset(std::size_t n_voiced, std::size_t n_voiceless) {
  Dataset d;
  for (std::size_t i = 0; i < n_voiced; ++i)
    d.records.push_back({"v" + std::to_string(i), V, 0.1 + 0.001 * i, 1.0 + 0.01 * i});
  for (std::size_t i = 0; i < n_voiceless; ++i)
    d.records.push_back({"u" + std::to_string(i), U, 0.2 + 0.001 * i, 0.1 + 0.001 * i});
  return d;
}

// Two well-separated gaussian clusters.
Dataset separable_clusters(std::uint64_t seed, std::size_t per_class) {
  Rng rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < per_class; ++i) {
    d.records.push_back({"v" + std::to_string(i), V, 1.0 + 0.1 * rng.normal(), 3.0 + 0.1 * rng.normal()});
    d.records.push_back({"u" + std::to_string(i), U, 1.0 + 0.1 * rng.normal(), 1.0 + 0.1 * rng.normal()});
  }
  return d;
}

double training_accuracy(ModelKind kind, const Dataset& d) {
  Model m(kind);
  m.fit(d.records);
  std::size_t right = 0;
  for (const auto& r : d.records) right += m.predict(r) == r.label;
  return static_cast<double>(right) / static_cast<double>(d.records.size());
}

}  // namespace

TEST_SUITE("learn") {
  TEST_CASE("stratified split counts") {
    const auto d = make_dataset(694, 322);
    const auto s = split_stratified(d, {0.3, 5, 1});
    CHECK(s.test.count(V) == 208);
    CHECK(s.test.count(U) == 97);
    CHECK(s.test.records.size() == 305);
    CHECK(s.train.records.size() == 1016 - 305);

    const auto small = split_stratified(make_dataset(4, 4), {0.5, 2, 3});
    CHECK(small.test.count(V) == 2);
    CHECK(small.test.count(U) == 2);
  }

  TEST_CASE("split rounding is half-even and clamped") {
    // 5 * 0.5 = 2.5 rounds to 2; 3 * 0.1 rounds to 0 and clamps to 1.
    const auto s = split_stratified(make_dataset(5, 3), {0.5, 2, 0});
    CHECK(s.test.count(V) == 2);
    const auto t = split_stratified(make_dataset(3, 3), {0.1, 2, 0});
    CHECK(t.test.count(V) == 1);
    const auto u = split_stratified(make_dataset(3, 3), {0.95, 2, 0});
    CHECK(u.train.count(V) == 1);
  }

  TEST_CASE("split is deterministic and partitions the records") {
    const auto d = make_dataset(40, 30);
    const auto a = split_stratified(d, {0.3, 5, 9});
    const auto b = split_stratified(d, {0.3, 5, 9});
    CHECK(a.test.records == b.test.records);
    CHECK(a.train.records == b.train.records);
    std::vector<std::string> ids;
    for (const auto& r : a.train.records) ids.push_back(r.record_id);
    for (const auto& r : a.test.records) ids.push_back(r.record_id);
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    CHECK(ids.size() == 70);
    const auto c = split_stratified(d, {0.3, 5, 10});
    CHECK(c.test.records != a.test.records);
  }

  TEST_CASE("split errors") {
    CHECK_THROWS_AS(split_stratified(make_dataset(1, 10), {}), InsufficientData);
    CHECK_THROWS_AS(split_stratified(make_dataset(10, 0), {}), InsufficientData);
    CHECK_THROWS_AS(split_stratified(make_dataset(10, 10), {1.0, 5, 0}), InvalidArgument);
    CHECK_THROWS_AS(split_stratified(make_dataset(10, 10), {0.3, 1, 0}), InvalidArgument);
  }

  TEST_CASE("k-fold on separable data") {
    for (auto kind : kAllModels) {
      const auto cv = kfold_cv(make_dataset(30, 30), {0.3, 5, 2}, kind);
      CHECK(cv.mean_accuracy == 1.0);
      CHECK(cv.folds.size() == 5);
    }
  }

  TEST_CASE("k-fold fold sizes") {
    const auto cv = kfold_cv(make_dataset(10, 10), {0.3, 5, 4}, ModelKind::knn);
    for (const auto& f : cv.folds) {
      CHECK(f.n_test == 4);
      CHECK(f.confusion.true_voiced + f.confusion.false_voiceless == 2);
      CHECK(f.confusion.true_voiceless + f.confusion.false_voiced == 2);
    }
    CHECK_THROWS_AS(kfold_cv(make_dataset(4, 10), {0.3, 5, 4}, ModelKind::knn), InsufficientData);
  }

  TEST_CASE("k-fold on uninformative features is near chance") {
    Rng rng(77);
    Dataset d;
    for (int i = 0; i < 200; ++i)
      d.records.push_back({"r" + std::to_string(i), rng.uniform() < 0.5 ? V : U, 0.5, 1.0});
    for (auto kind : kAllModels) {
      const auto cv = kfold_cv(d, {0.3, 5, 5}, kind);
      CHECK(cv.mean_accuracy >= 0.35);
      CHECK(cv.mean_accuracy <= 0.65);
    }
  }

  TEST_CASE("knn with k = 1") {
    auto c = make_classifier(ModelKind::knn, {1, false});
    const std::vector<FeatureVector> x = {{0, 0}, {1, 1}};
    const std::vector<int> y = {1, 0};
    c->fit(x, y);
    CHECK(c->score({0.1, 0.0}) == 1.0);
    CHECK(c->score({0.9, 1.0}) == 0.0);
  }

  TEST_CASE("knn ignores record ids") {
    const auto d = separable_clusters(3, 20);
    Dataset renamed = d;
    for (std::size_t i = 0; i < renamed.records.size(); ++i)
      renamed.records[i].record_id = "zz" + std::to_string(1000 - i);
    Model a(ModelKind::knn), b(ModelKind::knn);
    a.fit(d.records);
    b.fit(renamed.records);
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
      FeatureRecord q{"q", V, 1.0 + 0.3 * rng.normal(), 2.0 + rng.normal()};
      CHECK(a.score(q) == b.score(q));
    }
  }

  TEST_CASE("logistic separates 1-d data") {
    auto c = make_classifier(ModelKind::logistic, {5, false});
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = -10; i <= 10; ++i) {
      if (i == 0) continue;
      x.push_back({0.0, 0.1 * i});
      y.push_back(i > 0 ? 1 : 0);
    }
    c->fit(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK((c->score(x[i]) > 0.5) == (y[i] == 1));
  }

  TEST_CASE("gaussian naive bayes boundary is at zero for symmetric classes") {
    auto c = make_classifier(ModelKind::gaussian_nb, {5, false});
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (double v : {0.5, 1.0, 1.5, 2.0}) {
      x.push_back({v, 0.0});
      y.push_back(1);
      x.push_back({-v, 0.0});
      y.push_back(0);
    }
    c->fit(x, y);
    CHECK(std::abs(c->score({0.0, 0.0}) - 0.5) < 1e-12);
    // Bisect for the 0.5 crossing.
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (c->score({mid, 0.0}) < 0.5 ? lo : hi) = mid;
    }
    CHECK(std::abs(lo) < 1e-6);
    CHECK_FALSE(c->warnings().empty());  // zero variance in the second feature
  }

  TEST_CASE("every model fits separable clusters") {
    const auto d = separable_clusters(11, 40);
    for (auto kind : kAllModels) {
      CAPTURE(to_string(kind));
      CHECK(training_accuracy(kind, d) == 1.0);
    }
  }

  TEST_CASE("scores stay in [0, 1]") {
    const auto d = separable_clusters(12, 30);
    Rng rng(13);
    for (auto kind : kAllModels) {
      Model m(kind);
      m.fit(d.records);
      for (int i = 0; i < 100; ++i) {
        const double s = m.score({"q", V, 10.0 * rng.normal(), 10.0 * rng.normal()});
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }

  TEST_CASE("scaler uses training statistics only") {
    const auto d = separable_clusters(14, 30);
    Model m(ModelKind::logistic);
    m.fit(d.records);
    const auto mean = m.scaler().mean();
    const auto scale = m.scaler().scale();
    score_holdout(d, make_dataset(5, 5), ModelKind::logistic);
    for (int i = 0; i < 10; ++i) m.score({"q", V, 100.0 * i, -50.0 * i});
    CHECK(m.scaler().mean() == mean);
    CHECK(m.scaler().scale() == scale);

    // Holdout reports are unchanged by the test set composition beyond its rows.
    const auto a = score_holdout(d, make_dataset(5, 5), ModelKind::logistic);
    const auto b = score_holdout(d, make_dataset(7, 3), ModelKind::logistic);
    Model ref(ModelKind::logistic);
    ref.fit(d.records);
    CHECK(ref.scaler().mean() == mean);
    CHECK(a.n_train == b.n_train);
  }

  TEST_CASE("standardizer floors variance") {
    Standardizer s;
    const std::vector<FeatureVector> x = {{1.0, 2.0}, {1.0, 4.0}};
    s.fit(x);
    CHECK(s.warnings().size() == 1);
    CHECK(s.transform({1.0, 3.0})[0] == 0.0);
    CHECK(s.transform({1.0, 3.0})[1] == 0.0);
    CHECK(s.transform({1.0, 4.0})[1] == doctest::Approx(1.0));
  }

  TEST_CASE("auc examples") {
    const std::vector<double> s1 = {0.9, 0.8, 0.1, 0.2};
    const std::vector<Voicing> l1 = {V, V, U, U};
    CHECK(roc_auc(s1, l1).auc == 1.0);

    const std::vector<double> s2 = {0.9, 0.8, 0.4, 0.3};
    const std::vector<Voicing> l2 = {V, U, V, U};
    CHECK(roc_auc(s2, l2).auc == 0.75);

    const std::vector<double> s3 = {0.5, 0.5, 0.5, 0.5, 0.5};
    const std::vector<Voicing> l3 = {V, U, V, U, U};
    const auto flat = roc_auc(s3, l3);
    CHECK(flat.auc == 0.5);
    CHECK(flat.points.size() == 2);

    const std::vector<Voicing> one = {V, V};
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, one), InsufficientData);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1}, one), InvalidArgument);
  }

  TEST_CASE("auc matches pairwise concordance") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng.index(40);
      std::vector<double> scores(n);
      std::vector<Voicing> labels(n);
      std::vector<bool> pos(n);
      for (std::size_t i = 0; i < n; ++i) {
        scores[i] = static_cast<double>(rng.index(6)) / 5.0;  // many ties
        labels[i] = i % 2 == 0 ? V : U;
        pos[i] = labels[i] == V;
      }
      const auto curve = roc_auc(scores, labels);
      CHECK(curve.auc == doctest::Approx(oracle::mann_whitney_auc(scores, pos)).epsilon(1e-12));
      CHECK(curve.points.front() == RocPoint{0.0, 0.0});
      CHECK(curve.points.back() == RocPoint{1.0, 1.0});
      for (std::size_t k = 1; k < curve.points.size(); ++k) {
        CHECK(curve.points[k].fpr >= curve.points[k - 1].fpr);
        CHECK(curve.points[k].tpr >= curve.points[k - 1].tpr);
      }
    }
  }

  TEST_CASE("auc is invariant to increasing transforms") {
    Rng rng(22);
    std::vector<double> scores(60), moved(60);
    std::vector<Voicing> labels(60);
    for (std::size_t i = 0; i < 60; ++i) {
      scores[i] = 2.0 * rng.uniform() - 1.0;
      moved[i] = scores[i] * scores[i] * scores[i] + scores[i];
      labels[i] = rng.uniform() < 0.4 ? V : U;
    }
    const auto a = roc_auc(scores, labels);
    const auto b = roc_auc(moved, labels);
    CHECK(a.auc == b.auc);
    CHECK(a.points == b.points);
  }

  TEST_CASE("evaluation is deterministic") {
    const auto d = separable_clusters(30, 40);
    const SplitSpec spec{0.3, 5, 17};
    for (auto kind : kAllModels) {
      const auto a = evaluate(d, spec, kind);
      const auto b = evaluate(d, spec, kind);
      CHECK(format_report_json(a) == format_report_json(b));
      CHECK(a.fold_accuracies.size() == 5);
      CHECK(a.n_test == 24);
      CHECK(a.n_train == 56);
      const auto& c = a.confusion;
      CHECK(c.true_voiced + c.false_voiced + c.true_voiceless + c.false_voiceless == a.n_test);
    }
  }

  TEST_CASE("report formats") {
    const auto d = separable_clusters(31, 20);
    const auto r = evaluate(d, {0.3, 5, 1}, ModelKind::gaussian_nb);
    const auto json = format_report_json(r);
    CHECK(json.find("\"accuracy\"") != std::string::npos);
    CHECK(json.find("\"auc\"") != std::string::npos);
    CHECK(format_roc_csv(r.roc).rfind("fpr,tpr\n", 0) == 0);
    const std::vector<EvalReport> reports = {r};
    const auto summary = format_summary_csv(reports);
    CHECK(summary.find("gaussian_nb") != std::string::npos);
  }

  TEST_CASE("model kind names") {
    for (auto kind : kAllModels) CHECK(parse_model_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_model_kind("tree"), InvalidArgument);
  }

  TEST_CASE("rng is reproducible") {
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(6);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double z = c.normal();
      sum += z;
      sq += z * z;
    }
    CHECK(std::abs(sum / 20000) < 0.05);
    CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
    for (int i = 0; i < 1000; ++i) {
      const double u = c.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(c.index(7) < 7);
    }
  }
}
