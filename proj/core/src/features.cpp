#include "topcap/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

namespace topcap {

Screened<FeatureRecord> extract_feature(std::string record_id, Voicing label,
                                        const PersistenceDiagram& diagram) {
  if (diagram.dim != 1) throw InvalidArgument("extract_feature expects a dimension-1 diagram");
  const auto best = max_persistence(diagram);
  if (!best) return Rejection{RejectReason::empty_diagram, "dimension-1 diagram is empty"};
  return FeatureRecord{std::move(record_id), label, best->birth, best->lifetime};
}

std::string format_features_csv(std::span<const FeatureRecord> records) {
  std::string out = "record_id,label,birth,lifetime\n";
  for (const auto& r : records) {
    out += r.record_id;
    out += ',';
    out += to_string(r.label);
    out += ',' + format_double(r.birth) + ',' + format_double(r.lifetime) + '\n';
  }
  return out;
}

std::vector<FeatureRecord> parse_features_csv(const std::string& text) {
  std::vector<FeatureRecord> out;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "record_id,label,birth,lifetime")
        throw InvalidArgument("features CSV: expected header record_id,label,birth,lifetime");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4) throw InvalidArgument("features CSV line " + std::to_string(line_no));
    FeatureRecord r{std::string(trim(f[0])), parse_voicing(f[1]), parse_double(f[2]),
                    parse_double(f[3])};
    if (!(r.lifetime > 0.0) || !(r.birth >= 0.0))
      throw InvalidArgument("features CSV line " + std::to_string(line_no) +
                            ": need birth >= 0 and lifetime > 0");
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t DensityGrid::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

namespace {

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (hi == lo) {
    const double pad = lo == 0.0 ? 0.5 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

std::size_t bin_of(const std::vector<double>& edges, double v) {
  auto it = std::upper_bound(edges.begin(), edges.end(), v);
  auto idx = static_cast<std::size_t>(std::distance(edges.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, edges.size() - 2);
}

}  // namespace

DensityGrid lower_region_density(const PersistenceDiagram& diagram, std::size_t bins_x,
                                 std::size_t bins_y, double cutoff_fraction) {
  if (diagram.dim != 1) throw InvalidArgument("lower_region_density expects a dimension-1 diagram");
  if (diagram.points.empty()) throw InvalidArgument("lower_region_density: diagram is empty");
  if (bins_x == 0 || bins_y == 0) throw InvalidArgument("bin counts must be positive");
  if (!(cutoff_fraction > 0.0)) throw InvalidArgument("cutoff fraction must be positive");

  double max_life = 0.0;
  for (const auto& p : diagram.points) {
    if (std::isinf(p.death)) throw InvalidArgument("lower_region_density: infinite death");
    max_life = std::max(max_life, p.lifetime());
  }
  const double cutoff = cutoff_fraction * max_life;
  std::vector<PersistencePair> kept;
  for (const auto& p : diagram.points)
    if (p.lifetime() <= cutoff) kept.push_back(p);

  DensityGrid grid;
  if (kept.empty()) {
    grid.x_edges.assign(bins_x + 1, 0.0);
    grid.y_edges.assign(bins_y + 1, 0.0);
    grid.counts.assign(bins_x * bins_y, 0);
    grid.degenerate = true;
    return grid;
  }
  double bx0 = kInfinity, bx1 = -kInfinity, ly0 = kInfinity, ly1 = -kInfinity;
  for (const auto& p : kept) {
    bx0 = std::min(bx0, p.birth);
    bx1 = std::max(bx1, p.birth);
    ly0 = std::min(ly0, p.lifetime());
    ly1 = std::max(ly1, p.lifetime());
  }
  grid.x_edges = uniform_edges(bx0, bx1, bins_x);
  grid.y_edges = uniform_edges(ly0, ly1, bins_y);
  grid.counts.assign(bins_x * bins_y, 0);
  for (const auto& p : kept)
    ++grid.counts[bin_of(grid.x_edges, p.birth) * bins_y + bin_of(grid.y_edges, p.lifetime())];
  return grid;
}

std::string format_density_json(const DensityGrid& grid) {
  nlohmann::json j;
  j["x_edges"] = grid.x_edges;
  j["y_edges"] = grid.y_edges;
  j["bins_x"] = grid.bins_x();
  j["bins_y"] = grid.bins_y();
  j["counts"] = grid.counts;
  j["degenerate"] = grid.degenerate;
  return j.dump() + "\n";
}

namespace {

// Symmetric matrix in row-major storage.
struct SymMatrix {
  std::size_t n;
  std::vector<double> a;
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Top-k eigenpairs of a PSD matrix by power iteration with deflation.
std::vector<std::pair<double, std::vector<double>>> top_eigenpairs(SymMatrix m, std::size_t k,
                                                                   double trace) {
  constexpr double kTolerance = 1e-10;
  constexpr std::size_t kMaxIterations = 20000;
  std::vector<std::pair<double, std::vector<double>>> found;
  const std::size_t n = m.n;
  std::vector<double> w(n);
  for (std::size_t c = 0; c < k && c < n; ++c) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::sin(1.0 + 1.7 * static_cast<double>(i + c));
    double lambda = 0.0;
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
      // Keep the iterate orthogonal to directions already extracted.
      for (const auto& [l, u] : found) {
        const double dot = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u[i];
      }
      double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      if (!(norm > 0.0)) break;
      for (double& x : v) x /= norm;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
        w[i] = acc;
      }
      lambda = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
      norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (!(norm > 1e-300)) {
        lambda = 0.0;
        break;
      }
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double next = w[i] / norm;
        change = std::max(change, std::abs(next - v[i]));
        v[i] = next;
      }
      if (change < kTolerance) break;
    }
    if (lambda <= 1e-12 * trace) lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.a[i * n + j] -= lambda * v[i] * v[j];
    found.emplace_back(lambda, v);
  }
  return found;
}

}  // namespace

PcaProjection pca3(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dimension();
  if (n < 4) throw InvalidArgument("pca3 needs at least 4 points");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> x(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < d; ++j) x[i * d + j] = p[j] - mean[j];
  }

  // Work in the smaller of the covariance (d x d) and Gram (n x n) spaces;
  // both share the nonzero spectrum.
  const bool use_gram = n < d;
  const std::size_t m = use_gram ? n : d;
  SymMatrix mat{m, std::vector<double>(m * m, 0.0)};
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double acc = 0.0;
      if (use_gram) {
        for (std::size_t j = 0; j < d; ++j) acc += x[a * d + j] * x[b * d + j];
      } else {
        for (std::size_t i = 0; i < n; ++i) acc += x[i * d + a] * x[i * d + b];
      }
      acc /= static_cast<double>(n);
      mat.a[a * m + b] = acc;
      mat.a[b * m + a] = acc;
    }
  }
  double trace = 0.0;
  for (std::size_t a = 0; a < m; ++a) trace += mat(a, a);

  auto pairs = top_eigenpairs(mat, 3, trace);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });

  PcaProjection out;
  out.points.assign(n, {0.0, 0.0, 0.0});
  for (std::size_t c = 0; c < pairs.size() && c < 3; ++c) {
    const double lambda = pairs[c].first;
    if (!(lambda > 0.0) || !(trace > 0.0)) continue;
    out.explained_ratio[c] = lambda / trace;
    std::vector<double> dir(d, 0.0);
    if (use_gram) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) dir[j] += x[i * d + j] * pairs[c].second[i];
      const double norm = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
      if (!(norm > 0.0)) continue;
      for (double& v : dir) v /= norm;
    } else {
      dir = pairs[c].second;
    }
    // Sign convention: largest-magnitude component positive.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(dir[j]) > std::abs(dir[arg])) arg = j;
    if (dir[arg] < 0.0)
      for (double& v : dir) v = -v;
    for (std::size_t i = 0; i < n; ++i)
      out.points[i][c] = std::inner_product(dir.begin(), dir.end(), x.begin() + static_cast<std::ptrdiff_t>(i * d), 0.0);
  }
  return out;
}

std::string format_pca_csv(const PcaProjection& projection) {
  std::string out = "x,y,z\n";
  for (const auto& p : projection.points)
    out += format_double(p[0]) + ',' + format_double(p[1]) + ',' + format_double(p[2]) + '\n';
  return out;
}

std::string format_pca_ratios_json(const PcaProjection& projection) {
  nlohmann::json j;
  j["explained_variance_ratio"] = projection.explained_ratio;
  return j.dump() + "\n";
}

}  // namespace topcap
