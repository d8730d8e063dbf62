#pragma once

#include <string>

#include "sonartda/rips.hpp"
#include "sonartda/types.hpp"

namespace sonartda {

// Birth/death scatter with the diagonal; H0 black, H1 red, H2 blue.
// Truncated/essential features are drawn at the top edge as open markers.
void write_diagram_svg(const PersistenceDiagram& diag, const std::string& path);

// Closed polyline of the first two coordinates of a (projected) cloud.
void write_cloud_svg(const PointCloud& cloud, const std::string& path);

}  // namespace sonartda
