#pragma once

#include <span>
#include <string>

#include "topcap/persistence.hpp"

namespace topcap::cli {

/// Birth (x) against lifetime (y). Finite points are <circle> elements,
/// essential classes are <polygon> triangles pinned to the top margin, and a
/// dashed y = x line serves as a guide. An empty input draws the axes only.
std::string render_diagram_svg(std::span<const PersistenceDiagram> diagrams, std::string_view title = {});

}  // namespace topcap::cli
