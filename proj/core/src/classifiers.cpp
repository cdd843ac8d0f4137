#include "topcap/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::knn: return "knn";
    case ModelKind::logistic: return "logistic";
    case ModelKind::gaussian_nb: return "gaussian_nb";
    case ModelKind::linear_svm: return "linear_svm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view s) {
  s = trim(s);
  for (auto k : kAllModels)
    if (s == to_string(k)) return k;
  throw InvalidArgument("unknown model kind '" + std::string(s) + "'");
}

namespace {

constexpr double kVarianceFloor = 1e-9;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_training_set(std::span<const FeatureVector> x, std::span<const int> y) {
  if (x.size() != y.size()) throw InvalidArgument("feature and label counts differ");
  const auto pos = std::count(y.begin(), y.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == y.size())
    throw InsufficientData("training set needs both classes");
}

class KNearest final : public Classifier {
 public:
  explicit KNearest(std::size_t k) : k_(k) {
    if (k_ == 0) throw InvalidArgument("knn needs k >= 1");
  }

  void fit(std::span<const FeatureVector> x, std::span<const int> y) override {
    check_training_set(x, y);
    x_.assign(x.begin(), x.end());
    y_.assign(y.begin(), y.end());
  }

  double score(const FeatureVector& q) const override {
    std::vector<std::pair<double, std::size_t>> dist(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double a = x_[i][0] - q[0], b = x_[i][1] - q[1];
      dist[i] = {a * a + b * b, i};
    }
    // Distance ties resolve to the earlier training record.
    const std::size_t k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::size_t voiced = 0;
    for (std::size_t i = 0; i < k; ++i) voiced += static_cast<std::size_t>(y_[dist[i].second]);
    return static_cast<double>(voiced) / static_cast<double>(k);
  }

  ModelKind kind() const noexcept override { return ModelKind::knn; }

 private:
  std::size_t k_;
  std::vector<FeatureVector> x_;
  std::vector<int> y_;
};

class Logistic final : public Classifier {
 public:
  void fit(std::span<const FeatureVector> x, std::span<const int> y) override {
    check_training_set(x, y);
    constexpr std::size_t kMaxIterations = 10000;
    constexpr double kGradientTolerance = 1e-8;
    constexpr double kStep = 1.0;
    const double n = static_cast<double>(x.size());
    w_ = {0.0, 0.0};
    b_ = 0.0;
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
      double g0 = 0.0, g1 = 0.0, gb = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = sigmoid(w_[0] * x[i][0] + w_[1] * x[i][1] + b_) - y[i];
        g0 += r * x[i][0];
        g1 += r * x[i][1];
        gb += r;
      }
      g0 /= n;
      g1 /= n;
      gb /= n;
      if (std::sqrt(g0 * g0 + g1 * g1 + gb * gb) < kGradientTolerance) break;
      w_[0] -= kStep * g0;
      w_[1] -= kStep * g1;
      b_ -= kStep * gb;
    }
  }

  double score(const FeatureVector& q) const override {
    return sigmoid(w_[0] * q[0] + w_[1] * q[1] + b_);
  }

  ModelKind kind() const noexcept override { return ModelKind::logistic; }

 private:
  FeatureVector w_{0.0, 0.0};
  double b_ = 0.0;
};

class GaussianNaiveBayes final : public Classifier {
 public:
  void fit(std::span<const FeatureVector> x, std::span<const int> y) override {
    check_training_set(x, y);
    for (int c = 0; c < 2; ++c) {
      double count = 0.0;
      FeatureVector mean{0.0, 0.0}, var{0.0, 0.0};
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] != c) continue;
        count += 1.0;
        mean[0] += x[i][0];
        mean[1] += x[i][1];
      }
      mean[0] /= count;
      mean[1] /= count;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] != c) continue;
        var[0] += (x[i][0] - mean[0]) * (x[i][0] - mean[0]);
        var[1] += (x[i][1] - mean[1]) * (x[i][1] - mean[1]);
      }
      for (int f = 0; f < 2; ++f) {
        var[f] /= count;
        if (var[f] < kVarianceFloor) {
          warnings_.push_back("gaussian_nb: class " + std::to_string(c) + " feature " +
                              std::to_string(f) + " variance floored");
          var[f] = kVarianceFloor;
        }
      }
      mean_[c] = mean;
      var_[c] = var;
      log_prior_[c] = std::log(count / static_cast<double>(x.size()));
    }
  }

  double score(const FeatureVector& q) const override {
    double log_joint[2];
    for (int c = 0; c < 2; ++c) {
      double lj = log_prior_[c];
      for (int f = 0; f < 2; ++f) {
        const double diff = q[f] - mean_[c][f];
        lj -= 0.5 * (std::log(2.0 * 3.14159265358979323846 * var_[c][f]) + diff * diff / var_[c][f]);
      }
      log_joint[c] = lj;
    }
    return sigmoid(log_joint[1] - log_joint[0]);
  }

  ModelKind kind() const noexcept override { return ModelKind::gaussian_nb; }

 private:
  FeatureVector mean_[2]{};
  FeatureVector var_[2]{};
  double log_prior_[2]{};
};

// Hinge loss + (lambda/2)|w|^2 by full-batch subgradient descent, then Platt
// scaling of the margin on the training set.
class LinearSvm final : public Classifier {
 public:
  void fit(std::span<const FeatureVector> x, std::span<const int> y) override {
    check_training_set(x, y);
    constexpr double kLambda = 1e-3;
    constexpr std::size_t kIterations = 5000;
    constexpr double kStep0 = 0.5;
    const double n = static_cast<double>(x.size());

    auto objective = [&](const FeatureVector& w, double b) {
      double loss = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = y[i] ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - s * (w[0] * x[i][0] + w[1] * x[i][1] + b));
      }
      return loss / n + 0.5 * kLambda * (w[0] * w[0] + w[1] * w[1]);
    };

    FeatureVector w{0.0, 0.0};
    double b = 0.0;
    double best = objective(w, b);
    w_ = w;
    b_ = b;
    for (std::size_t t = 1; t <= kIterations; ++t) {
      double g0 = kLambda * w[0], g1 = kLambda * w[1], gb = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = y[i] ? 1.0 : -1.0;
        if (s * (w[0] * x[i][0] + w[1] * x[i][1] + b) < 1.0) {
          g0 -= s * x[i][0] / n;
          g1 -= s * x[i][1] / n;
          gb -= s / n;
        }
      }
      const double step = kStep0 / std::sqrt(static_cast<double>(t));
      w[0] -= step * g0;
      w[1] -= step * g1;
      b -= step * gb;
      const double obj = objective(w, b);
      if (obj < best) {
        best = obj;
        w_ = w;
        b_ = b;
      }
    }
    calibrate(x, y);
  }

  double score(const FeatureVector& q) const override {
    return sigmoid(platt_a_ * margin(q) + platt_b_);
  }

  ModelKind kind() const noexcept override { return ModelKind::linear_svm; }

 private:
  double margin(const FeatureVector& q) const { return w_[0] * q[0] + w_[1] * q[1] + b_; }

  // Platt's sigmoid fit with prior-smoothed targets, Newton steps with
  // backtracking.
  void calibrate(std::span<const FeatureVector> x, std::span<const int> y) {
    const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
    const double neg = static_cast<double>(y.size()) - pos;
    const double hi = (pos + 1.0) / (pos + 2.0);
    const double lo = 1.0 / (neg + 2.0);
    std::vector<double> m(x.size()), t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = margin(x[i]);
      t[i] = y[i] ? hi : lo;
    }
    auto loss = [&](double a, double b) {
      double l = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double z = a * m[i] + b;
        // -t log s(z) - (1-t) log(1 - s(z)), written stably.
        l += (z >= 0 ? std::log1p(std::exp(-z)) + (1.0 - t[i]) * z
                     : std::log1p(std::exp(z)) - t[i] * z);
      }
      return l;
    };
    double a = 1.0, b = 0.0;
    double current = loss(a, b);
    for (int it = 0; it < 100; ++it) {
      double ga = 0.0, gb = 0.0, haa = 1e-12, hab = 0.0, hbb = 1e-12;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double p = sigmoid(a * m[i] + b);
        const double r = p - t[i];
        const double wgt = p * (1.0 - p);
        ga += r * m[i];
        gb += r;
        haa += wgt * m[i] * m[i];
        hab += wgt * m[i];
        hbb += wgt;
      }
      if (std::sqrt(ga * ga + gb * gb) < 1e-10) break;
      const double det = haa * hbb - hab * hab;
      double da = -(hbb * ga - hab * gb) / det;
      double db = -(haa * gb - hab * ga) / det;
      if (!std::isfinite(da) || !std::isfinite(db)) break;
      double step = 1.0;
      bool improved = false;
      while (step > 1e-10) {
        const double next = loss(a + step * da, b + step * db);
        if (next < current) {
          a += step * da;
          b += step * db;
          current = next;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    platt_a_ = a;
    platt_b_ = b;
  }

  FeatureVector w_{0.0, 0.0};
  double b_ = 0.0;
  double platt_a_ = 1.0;
  double platt_b_ = 0.0;
};

}  // namespace

std::unique_ptr<Classifier> make_classifier(ModelKind kind, const ModelOptions& opts) {
  switch (kind) {
    case ModelKind::knn: return std::make_unique<KNearest>(opts.k);
    case ModelKind::logistic: return std::make_unique<Logistic>();
    case ModelKind::gaussian_nb: return std::make_unique<GaussianNaiveBayes>();
    case ModelKind::linear_svm: return std::make_unique<LinearSvm>();
  }
  throw InvalidArgument("unknown model kind");
}

void Standardizer::fit(std::span<const FeatureVector> x) {
  if (x.empty()) throw InsufficientData("cannot standardize an empty training set");
  warnings_.clear();
  const double n = static_cast<double>(x.size());
  for (int f = 0; f < 2; ++f) {
    double mean = 0.0;
    for (const auto& v : x) mean += v[f];
    mean /= n;
    double var = 0.0;
    for (const auto& v : x) var += (v[f] - mean) * (v[f] - mean);
    var /= n;
    if (var < kVarianceFloor) {
      warnings_.push_back("standardizer: feature " + std::to_string(f) + " variance floored");
      var = kVarianceFloor;
    }
    mean_[f] = mean;
    scale_[f] = std::sqrt(var);
  }
}

FeatureVector Standardizer::transform(const FeatureVector& x) const noexcept {
  return {(x[0] - mean_[0]) / scale_[0], (x[1] - mean_[1]) / scale_[1]};
}

Model::Model(ModelKind kind, const ModelOptions& opts)
    : opts_(opts), classifier_(make_classifier(kind, opts)) {}

void Model::fit(std::span<const FeatureRecord> train) {
  std::vector<FeatureVector> x;
  std::vector<int> y;
  x.reserve(train.size());
  y.reserve(train.size());
  for (const auto& r : train) {
    x.push_back(features_of(r));
    y.push_back(r.label == Voicing::voiced ? 1 : 0);
  }
  scaler_ = Standardizer{};
  if (opts_.standardize) {
    scaler_.fit(x);
    for (auto& v : x) v = scaler_.transform(v);
  }
  classifier_->fit(x, y);
}

double Model::score(const FeatureRecord& r) const {
  return classifier_->score(scaler_.transform(features_of(r)));
}

Voicing Model::predict(const FeatureRecord& r) const {
  return score(r) >= 0.5 ? Voicing::voiced : Voicing::voiceless;
}

std::vector<std::string> Model::warnings() const {
  std::vector<std::string> out = scaler_.warnings();
  out.insert(out.end(), classifier_->warnings().begin(), classifier_->warnings().end());
  return out;
}

}  // namespace topcap
