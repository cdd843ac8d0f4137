#pragma once

#include <cstddef>
#include <vector>

#include "topcap/persistence.hpp"

namespace topcap {

inline constexpr std::size_t kBruteForceMaxPoints = 12;

/// Reference persistence by explicit boundary-matrix reduction.
///
/// Enumerates every simplex up to dimension max_dim + 1 of the full Rips
/// complex, orders them by (filtration value, dimension, lexicographic vertex
/// tuple) and runs the textbook left-to-right column reduction over Z/2.
/// Shares no code with rips_persistence. Refuses more than
/// kBruteForceMaxPoints points (TooLarge).
std::vector<PersistenceDiagram> brute_force_persistence(const DistanceMatrix& dmat, int max_dim);

}  // namespace topcap
