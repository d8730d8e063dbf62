#pragma once

#include <optional>
#include <vector>

#include "sonartda/signal_ops.hpp"
#include "sonartda/types.hpp"

namespace sonartda {

// Configuration of the angle-lagged embedding.  Each offset must land on an
// integer grid shift; interpolation between samples is deliberately not
// offered.  With no reducer the channels of every lag are concatenated
// as-is (real and imaginary parts separately for complex data).
struct DelayConfig {
  std::vector<double> offsets_deg;
  std::optional<ChannelReducer> reducer;  // nullopt = identity
};

// Point cloud of angle-lagged sample vectors, one point per grid angle,
// labeled with the angle.  Wraps periodically.
PointCloud delay_embed(const SignalMap& map, const DelayConfig& config);

// Pairs the value of a real single-channel sphere-grid map with its two
// angular partial derivatives: one 3-vector (u, du/d_el, du/d_az) per grid
// node, labeled (azimuth, elevation).  Azimuth uses central differences
// with periodic wrap; elevation uses central differences in the interior
// and one-sided second-order stencils on the first and last rows.
// Derivatives are per radian.
PointCloud tangent_map(const SignalMap& map);

// Mean-centered projection onto the out_dim leading principal axes.
// Axes are eigenvectors of the coordinate covariance, computed with cyclic
// Jacobi sweeps, ordered by descending eigenvalue, each signed so that its
// largest-magnitude component is positive.  Labels carry over.
PointCloud pca_project(const PointCloud& cloud, int out_dim);

}  // namespace sonartda
