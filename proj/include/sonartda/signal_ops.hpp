#pragma once

#include <array>
#include <vector>

#include "sonartda/types.hpp"

namespace sonartda {

// Pointwise reductions from a multi-channel sample vector to real values.
enum class ChannelReducer {
  kMagnitude,      // per-channel |z|, keeps the channel count
  kMaxMagnitude,   // max_q |z_q|, one output channel
  kL2Magnitude,    // sqrt(sum_q |z_q|^2), one output channel
};

// Angular coordinates of every grid node, in grid-index order.
// Circle(n):      {360 i / n}, degrees, second entry zero.
// SphereGrid(a,e): azimuth uniform on [0,360), elevation cell-centered on
//                  (-90,90) so the poles are excluded; entries (az, el).
// Interval(n):    uniform on [0,1] inclusive, second entry zero.
std::vector<std::array<double, 2>> grid_points(const DomainDescriptor& domain);

// Real-valued map (im = 0 everywhere) obtained by applying the reduction
// pointwise.  The domain is unchanged.
SignalMap magnitude_channel(const SignalMap& map, ChannelReducer reducer);

// Largest per-channel magnitude over the whole map.
double peak_magnitude(const SignalMap& map);

// Map scaled by a real factor.
SignalMap scale_map(const SignalMap& map, double factor);

}  // namespace sonartda
