#include <algorithm>
#include <cmath>

#include "topcap/error.hpp"
#include "topcap/persistence.hpp"

namespace topcap {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw InvalidArgument("distance matrix has the wrong size");
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0) throw InvalidArgument("distance matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument("distance matrix entries must be finite and nonnegative");
      if (v != (*this)(j, i)) throw InvalidArgument("distance matrix is not symmetric");
    }
  }
}

DistanceMatrix distance_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> entries(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = cloud.point(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        acc += diff * diff;
      }
      const double dist = std::sqrt(acc);
      entries[i * n + j] = dist;
      entries[j * n + i] = dist;
    }
  }
  return DistanceMatrix(n, std::move(entries));
}

double enclosing_radius(const DistanceMatrix& dmat) {
  if (dmat.size() <= 1) return 0.0;
  double best = kInfinity;
  for (std::size_t i = 0; i < dmat.size(); ++i) {
    const auto row = dmat.row(i);
    best = std::min(best, *std::max_element(row.begin(), row.end()));
  }
  return best;
}

}  // namespace topcap
