#pragma once

#include <array>
#include <limits>
#include <vector>

#include "sonartda/types.hpp"

namespace sonartda {

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

enum class MetricTag { kEuclidean, kPolylineGeodesic };

// Symmetric pairwise-distance matrix with zero diagonal, the input to the
// Vietoris-Rips filtration.
class DistanceMatrix {
 public:
  DistanceMatrix(int n, std::vector<double> entries, MetricTag tag);

  int size() const { return n_; }
  MetricTag metric() const { return tag_; }
  double operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * n_ + j];
  }
  double diameter() const;

 private:
  int n_;
  std::vector<double> entries_;  // dense n x n
  MetricTag tag_;
};

// Euclidean pairwise distances; the parallel kernel and the serial
// reference are bit-identical.
DistanceMatrix distance_matrix(const PointCloud& cloud, MetricTag metric);
DistanceMatrix distance_matrix_serial(const PointCloud& cloud, MetricTag metric);

// One homology generator.  death is +inf for classes that never die below
// the truncation scale; `truncated` marks the ones that would die later
// (their true death exceeds the scale the filtration was cut at).
struct Feature {
  int dim = 0;
  double birth = 0.0;
  double death = kInfDeath;
  bool truncated = false;

  double lifetime() const { return death - birth; }
  bool operator==(const Feature&) const = default;
};

struct PersistenceDiagram {
  std::vector<Feature> features;   // sorted by (dim, birth, death)
  double truncation_eps = kInfDeath;  // scale the filtration was cut at
};

// Vietoris-Rips persistent homology in dimensions 0..max_dim (max_dim <= 2)
// of the filtration truncated at max_eps.  A simplex enters at the largest
// pairwise distance among its vertices.  Dimension 0 uses union-find over
// edges sorted ascending; dimensions 1-2 use Z/2 boundary-matrix column
// reduction with the clearing optimization, processing dimensions top-down.
// Simplices are ordered by (filtration value, dimension, lexicographic
// vertex tuple), so the diagram is deterministic across runs and thread
// counts.  Zero-persistence pairs (birth == death) are omitted.
PersistenceDiagram rips_persistence(const DistanceMatrix& d, int max_dim,
                                    double max_eps);

// Verification oracle: enumerates every simplex up to dim max_dim+1 with no
// size cutoff, reduces the full boundary matrix in one global pass with no
// optimizations, then truncates the diagram at max_eps.  Same output
// contract as rips_persistence, bit for bit.  Refuses n > 12.
PersistenceDiagram naive_rips_oracle(const DistanceMatrix& d, int max_dim,
                                     double max_eps);

// Betti numbers (b0, b1, b2) at scale eps: features with birth <= eps < death.
std::array<int, 3> betti_at(const PersistenceDiagram& diag, double eps);

// The k longest-lived finite features of one dimension, sorted by
// descending lifetime (ties: smaller birth first).
std::vector<Feature> top_k_features(const PersistenceDiagram& diag, int dim,
                                    int k);

void write_diagram_csv(const PersistenceDiagram& diag, const std::string& path);
PersistenceDiagram read_diagram_csv(const std::string& path);

}  // namespace sonartda
