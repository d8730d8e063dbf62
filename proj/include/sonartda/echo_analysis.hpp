#pragma once

#include <array>
#include <vector>

#include "sonartda/rips.hpp"
#include "sonartda/types.hpp"

namespace sonartda {

// One detected prominent echo: a wrap-aware half-open run of grid angles
// whose signal exceeds the detection threshold.
struct EchoSupport {
  int start_index = 0;     // first grid index of the run
  int length = 0;          // number of grid samples in the run
  double start_deg = 0.0;
  double end_deg = 0.0;    // angle one step past the last sample, mod 360
  double peak_angle_deg = 0.0;
  double cross_section = 0.0;  // max signal magnitude inside the run
  double loop_length = 0.0;    // closed polyline through the samples and 0
};

struct DeathBoundVerdict {
  double cross_section = 0.0;
  double bound = 0.0;          // (sigma/2) * (1 - tolerance)
  double matched_death = 0.0;  // NaN when no feature was available
  bool matched_truncated = false;
  bool pass = false;
};

struct EchoReport {
  std::vector<EchoSupport> echos;
  double threshold_fraction = 0.0;
  double threshold_value = 0.0;
  std::array<int, 3> expected_betti{1, 0, 0};
  std::vector<DeathBoundVerdict> verdicts;  // aligned with echos sorted by
                                            // descending cross section
};

// Threshold segmentation of a real circle-domain map.  The threshold is
// threshold_fraction times the global maximum; maximal runs of consecutive
// angles above it, merged across the 0/360 wrap, become echo supports.
// Multi-channel maps are thresholded on the per-angle channel sup norm.
// An all-zero map yields no echos.
std::vector<EchoSupport> detect_prominent_echos(const SignalMap& map,
                                                double threshold_fraction);

// Betti numbers a wedge of `num_echos` spheres of dimension `domain_dim`
// predicts: b0 = 1, b_domain_dim = num_echos, rest zero.
std::array<int, 3> expected_betti(int num_echos, int domain_dim);

// Matches echos (descending cross section) against the longest-lived
// dim-`dim` features and checks death >= (sigma/2)(1 - tolerance).
// Truncated features pass when the truncation scale already exceeds the
// bound.  Missing features produce failing verdicts, never a throw.
std::vector<DeathBoundVerdict> check_death_bound(
    const std::vector<EchoSupport>& echos, const PersistenceDiagram& diag,
    int dim, double sampling_tolerance);

// 2 min(p, l) > d: whether p scatterers sampled at l wavenumbers give an
// injective signal map in d spatial dimensions for generic parameters.
bool injectivity_condition(int num_scatterers, int num_wavenumbers,
                           int spatial_dim);

// Connected components (4-neighborhood, azimuth wraps, elevation does not)
// of the grid nodes of a real sphere-grid map lying strictly above (or
// below) the threshold.
int count_threshold_regions(const SignalMap& map, double threshold,
                            bool above);

struct SelfIntersection {
  double theta_i_deg = 0.0;
  double theta_j_deg = 0.0;
  double pair_distance = 0.0;
  double min_point_norm = 0.0;  // near zero: expected; large: suspicious
};

// All point pairs closer than codomain_tol whose circle angles differ by
// more than domain_sep_deg, annotated with the smaller point norm so
// near-zero self-intersections can be told apart from far-from-zero ones.
std::vector<SelfIntersection> self_intersection_scan(const PointCloud& cloud,
                                                     double codomain_tol,
                                                     double domain_sep_deg);

}  // namespace sonartda
