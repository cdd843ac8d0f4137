#include "topcap/brute_force.hpp"

#include <algorithm>
#include <map>

#include "topcap/error.hpp"

namespace topcap {
namespace {

struct Simplex {
  std::vector<std::size_t> vertices;  // ascending
  int dim;
  double value;
};

void enumerate(const DistanceMatrix& dmat, std::size_t max_size, std::vector<std::size_t>& current,
               std::size_t next, std::vector<Simplex>& out) {
  if (!current.empty()) {
    double value = 0.0;
    for (std::size_t a = 0; a < current.size(); ++a)
      for (std::size_t b = a + 1; b < current.size(); ++b)
        value = std::max(value, dmat(current[a], current[b]));
    out.push_back({current, static_cast<int>(current.size()) - 1, value});
  }
  if (current.size() == max_size) return;
  for (std::size_t v = next; v < dmat.size(); ++v) {
    current.push_back(v);
    enumerate(dmat, max_size, current, v + 1, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<PersistenceDiagram> brute_force_persistence(const DistanceMatrix& dmat, int max_dim) {
  const std::size_t n = dmat.size();
  if (n == 0) throw EmptyInput("brute_force_persistence: no points");
  if (n > kBruteForceMaxPoints)
    throw TooLarge("brute_force_persistence refuses " + std::to_string(n) + " points (limit " +
                   std::to_string(kBruteForceMaxPoints) + ")");
  if (max_dim < 0 || max_dim > 1) throw InvalidArgument("max_dim must be 0 or 1");

  std::vector<Simplex> simplices;
  std::vector<std::size_t> scratch;
  enumerate(dmat, static_cast<std::size_t>(max_dim) + 2, scratch, 0, simplices);
  std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });

  const std::size_t m = simplices.size();
  std::map<std::vector<std::size_t>, std::size_t> position;
  for (std::size_t k = 0; k < m; ++k) position.emplace(simplices[k].vertices, k);

  // Dense Z/2 boundary matrix, one column per simplex.
  std::vector<std::vector<unsigned char>> boundary(m, std::vector<unsigned char>(m, 0));
  for (std::size_t k = 0; k < m; ++k) {
    const auto& verts = simplices[k].vertices;
    if (verts.size() < 2) continue;
    for (std::size_t drop = 0; drop < verts.size(); ++drop) {
      std::vector<std::size_t> face;
      for (std::size_t v = 0; v < verts.size(); ++v)
        if (v != drop) face.push_back(verts[v]);
      boundary[k][position.at(face)] = 1;
    }
  }

  auto low = [&](std::size_t col) -> long {
    for (std::size_t r = m; r-- > 0;)
      if (boundary[col][r]) return static_cast<long>(r);
    return -1;
  };

  std::vector<long> low_of(m, -1);
  std::vector<long> column_with_low(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    long l = low(j);
    while (l >= 0 && column_with_low[static_cast<std::size_t>(l)] >= 0) {
      const auto& other = boundary[static_cast<std::size_t>(column_with_low[static_cast<std::size_t>(l)])];
      for (std::size_t r = 0; r < m; ++r) boundary[j][r] ^= other[r];
      l = low(j);
    }
    low_of[j] = l;
    if (l >= 0) column_with_low[static_cast<std::size_t>(l)] = static_cast<long>(j);
  }

  std::vector<PersistenceDiagram> result;
  for (int d = 0; d <= max_dim; ++d) result.push_back({d, {}});
  for (std::size_t j = 0; j < m; ++j) {
    const long l = low_of[j];
    if (l >= 0) {
      const Simplex& birth = simplices[static_cast<std::size_t>(l)];
      if (birth.dim <= max_dim && simplices[j].value > birth.value)
        result[static_cast<std::size_t>(birth.dim)].points.push_back({birth.value, simplices[j].value});
    } else if (column_with_low[j] < 0 && simplices[j].dim <= max_dim) {
      // Zero column that never serves as a pivot: an essential class.
      result[static_cast<std::size_t>(simplices[j].dim)].points.push_back({simplices[j].value, kInfinity});
    }
  }
  for (auto& dgm : result) dgm.canonicalize();
  return result;
}

}  // namespace topcap
