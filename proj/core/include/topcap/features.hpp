#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "topcap/embedding.hpp"
#include "topcap/outcome.hpp"
#include "topcap/persistence.hpp"
#include "topcap/phones.hpp"

namespace topcap {

/// One classifier row: the dominant dimension-1 class of a record.
struct FeatureRecord {
  std::string record_id;
  Voicing label = Voicing::voiced;
  double birth = 0.0;
  double lifetime = 0.0;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

/// Birth and lifetime of max_persistence(diagram); an empty diagram is
/// excluded with RejectReason::empty_diagram.
Screened<FeatureRecord> extract_feature(std::string record_id, Voicing label,
                                        const PersistenceDiagram& diagram);

// header record_id,label,birth,lifetime
std::string format_features_csv(std::span<const FeatureRecord> records);
std::vector<FeatureRecord> parse_features_csv(const std::string& text);

struct DensityGrid {
  std::vector<double> x_edges;  // birth
  std::vector<double> y_edges;  // lifetime
  std::vector<std::size_t> counts;  // row-major, x bins by y bins
  bool degenerate = false;          // no point fell below the cutoff

  std::size_t bins_x() const noexcept { return x_edges.size() - 1; }
  std::size_t bins_y() const noexcept { return y_edges.size() - 1; }
  std::size_t at(std::size_t ix, std::size_t iy) const { return counts[ix * bins_y() + iy]; }
  std::size_t total() const noexcept;
};

/// 2-D histogram over (birth, lifetime) of the points whose lifetime is at
/// most cutoff_fraction times the largest lifetime. Bin edges are uniform
/// over the bounding box of the retained points; a zero-width axis is padded
/// by half its magnitude (or 0.5 at zero). Bins are half-open except the last.
DensityGrid lower_region_density(const PersistenceDiagram& diagram, std::size_t bins_x = 16,
                                 std::size_t bins_y = 16, double cutoff_fraction = 0.5);

std::string format_density_json(const DensityGrid& grid);

struct PcaProjection {
  std::vector<std::array<double, 3>> points;
  std::array<double, 3> explained_ratio{};
};

/// Projects the centred cloud onto its top three principal directions, found
/// by power iteration with deflation (tolerance 1e-10). Missing directions
/// (rank < 3) get ratio 0 and zero coordinates. Needs at least 4 points.
PcaProjection pca3(const PointCloud& cloud);

std::string format_pca_csv(const PcaProjection& projection);
std::string format_pca_ratios_json(const PcaProjection& projection);

}  // namespace topcap
