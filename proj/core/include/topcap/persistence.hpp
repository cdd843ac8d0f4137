#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topcap/embedding.hpp"

namespace topcap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense symmetric matrix of pairwise distances with a zero diagonal.
class DistanceMatrix {
 public:
  /// Validates symmetry (exact), zero diagonal, finiteness and nonnegativity.
  DistanceMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Euclidean distances between the points of `cloud`.
DistanceMatrix distance_matrix(const PointCloud& cloud);

/// min over i of max over j of d(i, j); 0 for a single point.
double enclosing_radius(const DistanceMatrix& dmat);

struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;  // kInfinity for essential classes

  double lifetime() const noexcept { return death - birth; }
  friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  int dim = 0;
  std::vector<PersistencePair> points;

  /// Sorts points by (birth, death).
  void canonicalize();
  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

struct RipsOptions {
  int max_dim = 1;                   // 0 or 1
  std::optional<double> threshold;   // empty: truncate at the enclosing radius
};

/// Vietoris-Rips persistent homology over Z/2 in dimensions 0..max_dim.
///
/// Dimension 0 comes from Kruskal's algorithm on the edge order. Dimension 1
/// reduces the coboundary matrix of edges column by column, latest edge first,
/// after clearing every edge that already merged two components. Pairs with
/// zero lifetime are omitted; diagrams are returned canonicalized.
/// Throws EmptyInput when the matrix has no points.
std::vector<PersistenceDiagram> rips_persistence(const DistanceMatrix& dmat,
                                                 const RipsOptions& opts = {});

struct MaxPersistence {
  double birth;
  double lifetime;
  friend bool operator==(const MaxPersistence&, const MaxPersistence&) = default;
};

/// The pair with the largest lifetime; ties go to the smaller birth, then the
/// smaller death. Empty diagrams yield nullopt. Infinite deaths are rejected.
std::optional<MaxPersistence> max_persistence(const PersistenceDiagram& diagram);

// {"dim": k, "points": [[b, d], ...]}, "inf" for infinite deaths. A list of
// diagrams is written as a JSON array of such objects.
std::string format_diagram_json(const PersistenceDiagram& diagram);
std::string format_diagrams_json(std::span<const PersistenceDiagram> diagrams);
/// Accepts a single diagram object or an array of them.
std::vector<PersistenceDiagram> parse_diagrams_json(const std::string& text);

// `dim,birth,death` rows.
std::string format_diagrams_csv(std::span<const PersistenceDiagram> diagrams);
std::vector<PersistenceDiagram> parse_diagrams_csv(const std::string& text);

}  // namespace topcap
