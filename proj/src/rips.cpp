#include "sonartda/rips.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace sonartda {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Vertex tuples pack into one word, highest vertex first, so integer order
// on keys equals lexicographic order on tuples of equal length.
inline u64 pack2(u32 i, u32 j) { return (u64(i) << 48) | (u64(j) << 32); }
inline u64 pack3(u32 i, u32 j, u32 k) {
  return (u64(i) << 48) | (u64(j) << 32) | (u64(k) << 16);
}
inline u64 pack4(u32 i, u32 j, u32 k, u32 l) {
  return (u64(i) << 48) | (u64(j) << 32) | (u64(k) << 16) | u64(l);
}

using Simplex = std::pair<double, u64>;  // (filtration value, packed vertices)

void sort_simplices(std::vector<Simplex>& s) {
  std::sort(s.begin(), s.end());
}

// Union-find with path compression.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  // Returns false when already connected.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

// Symmetric difference of two ascending index lists.
void sym_diff(const std::vector<u32>& a, const std::vector<u32>& b,
              std::vector<u32>& out) {
  out.clear();
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] < b[ib]) out.push_back(a[ia++]);
    else if (b[ib] < a[ia]) out.push_back(b[ib++]);
    else { ++ia; ++ib; }
  }
  out.insert(out.end(), a.begin() + ia, a.end());
  out.insert(out.end(), b.begin() + ib, b.end());
}

struct ReductionResult {
  std::vector<std::pair<u32, u32>> pairs;  // (row, column)
  std::vector<u32> positives;              // columns that reduced to zero
};

// Standard left-to-right Z/2 column reduction.  Columns arrive in
// filtration order; rows are indices into the sorted facet list.  Columns
// flagged in `cleared` are skipped: they are known to reduce to zero from
// the pairing one dimension up.
ReductionResult reduce_columns(
    std::size_t n_cols, std::size_t n_rows,
    const std::vector<std::uint8_t>* cleared,
    const std::function<void(u32, std::vector<u32>&)>& facets) {
  ReductionResult res;
  std::vector<std::vector<u32>> owner_col(n_rows);
  std::vector<std::uint8_t> owned(n_rows, 0);
  std::vector<u32> col, tmp;
  for (u32 c = 0; c < n_cols; ++c) {
    if (cleared && (*cleared)[c]) continue;
    facets(c, col);
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const u32 r = col.back();
      if (!owned[r]) {
        owned[r] = 1;
        owner_col[r] = col;
        res.pairs.emplace_back(r, c);
        break;
      }
      sym_diff(col, owner_col[r], tmp);
      col.swap(tmp);
    }
    if (col.empty()) res.positives.push_back(c);
  }
  return res;
}

void sort_features(std::vector<Feature>& f) {
  std::sort(f.begin(), f.end(), [](const Feature& a, const Feature& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.death != b.death) return a.death < b.death;
    return a.truncated < b.truncated;
  });
}

}  // namespace

DistanceMatrix::DistanceMatrix(int n, std::vector<double> entries,
                               MetricTag tag)
    : n_(n), entries_(std::move(entries)), tag_(tag) {
  if (n_ < 1) throw ValidationError("distance matrix needs n >= 1");
  if (entries_.size() != static_cast<std::size_t>(n_) * n_)
    throw ValidationError("distance matrix entries must be n x n");
  for (int i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0)
      throw ValidationError("distance matrix diagonal must be zero");
    for (int j = i + 1; j < n_; ++j) {
      const double d = (*this)(i, j);
      if (!std::isfinite(d) || d < 0.0)
        throw ValidationError("distances must be finite and nonnegative");
      if (d != (*this)(j, i))
        throw ValidationError("distance matrix must be exactly symmetric");
    }
  }
}

double DistanceMatrix::diameter() const {
  double m = 0.0;
  for (double d : entries_) m = std::max(m, d);
  return m;
}

namespace {

template <bool Parallel>
DistanceMatrix distance_matrix_impl(const PointCloud& cloud, MetricTag metric) {
  const int n = cloud.size();
  if (n < 1) throw ValidationError("distance matrix needs a nonempty cloud");
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);

  if (metric == MetricTag::kEuclidean) {
    const int dim = cloud.ambient_dim();
    const double* base = cloud.coords().data();
#pragma omp parallel for schedule(dynamic, 8) if (Parallel)
    for (int i = 0; i < n; ++i) {
      const double* pi = base + static_cast<std::size_t>(i) * dim;
      for (int j = i + 1; j < n; ++j) {
        const double* pj = base + static_cast<std::size_t>(j) * dim;
        double s = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double diff = pi[c] - pj[c];
          s += diff * diff;
        }
        const double dist = std::sqrt(s);
        d[static_cast<std::size_t>(i) * n + j] = dist;
        d[static_cast<std::size_t>(j) * n + i] = dist;
      }
    }
    return {n, std::move(d), metric};
  }

  // Polyline geodesic: shortest way around the closed polyline through the
  // points in label order.
  if (!cloud.has_labels() || cloud.label_dim() != 1)
    throw ValidationError(
        "polyline-geodesic metric requires circle-angle labels");
  for (int i = 1; i < n; ++i)
    if (!(cloud.labels()[i][0] > cloud.labels()[i - 1][0]))
      throw ValidationError(
          "polyline-geodesic metric requires labels strictly increasing "
          "along the circle");
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto pa = cloud.point(i);
    const auto pb = cloud.point((i + 1) % n);
    double s = 0.0;
    for (int c = 0; c < cloud.ambient_dim(); ++c) {
      const double diff = pa[c] - pb[c];
      s += diff * diff;
    }
    prefix[i + 1] = prefix[i] + std::sqrt(s);
  }
  const double total = prefix[n];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double along = prefix[j] - prefix[i];
      const double dist = std::min(along, total - along);
      d[static_cast<std::size_t>(i) * n + j] = dist;
      d[static_cast<std::size_t>(j) * n + i] = dist;
    }
  }
  return {n, std::move(d), metric};
}

}  // namespace

DistanceMatrix distance_matrix(const PointCloud& cloud, MetricTag metric) {
  return distance_matrix_impl<true>(cloud, metric);
}

DistanceMatrix distance_matrix_serial(const PointCloud& cloud,
                                      MetricTag metric) {
  return distance_matrix_impl<false>(cloud, metric);
}

PersistenceDiagram rips_persistence(const DistanceMatrix& d, int max_dim,
                                    double max_eps) {
  if (max_dim < 0 || max_dim > 2)
    throw ValidationError("rips_persistence supports max_dim 0, 1 or 2");
  if (!(max_eps > 0.0)) throw ValidationError("max_eps must be > 0");
  const int n = d.size();
  if (n > 65535) throw ValidationError("rips_persistence supports n <= 65535");
  if (max_dim == 2 && n > 200 && max_eps >= d.diameter())
    throw ValidationError(
        "dim-2 runs on > 200 points need an explicit max_eps cap below the "
        "diameter");

  PersistenceDiagram diag;
  diag.truncation_eps = max_eps;

  // Dimension 0: Kruskal over edges within the cap.  Merges past the cap
  // all contribute indistinguishable truncated features, so only the
  // component count at the cap is needed.
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d(i, j) <= max_eps) edges.emplace_back(d(i, j), pack2(i, j));
  sort_simplices(edges);

  UnionFind uf(n);
  std::vector<std::uint8_t> creator(edges.size(), 0);
  int components = n;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const u32 i = u32(edges[e].second >> 48);
    const u32 j = u32(edges[e].second >> 32) & 0xFFFFu;
    if (uf.unite(int(i), int(j))) {
      --components;
      if (edges[e].first > 0.0)
        diag.features.push_back({0, 0.0, edges[e].first, false});
    } else {
      creator[e] = 1;
    }
  }
  for (int c = 0; c < components - 1; ++c)
    diag.features.push_back({0, 0.0, kInfDeath, true});
  diag.features.push_back({0, 0.0, kInfDeath, false});

  if (max_dim >= 1) {
    // Neighbor lists above the diagonal drive the clique enumeration.
    std::vector<std::vector<u32>> nbr(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (d(i, j) <= max_eps) nbr[i].push_back(u32(j));

    std::vector<std::vector<Simplex>> tri_rows(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      const auto& ni = nbr[i];
      for (std::size_t a = 0; a < ni.size(); ++a) {
        const u32 j = ni[a];
        const double dij = d(i, j);
        for (std::size_t b = a + 1; b < ni.size(); ++b) {
          const u32 k = ni[b];
          const double djk = d(j, k);
          if (djk > max_eps) continue;
          const double filt = std::max({dij, d(i, k), djk});
          tri_rows[i].emplace_back(filt, pack3(u32(i), j, k));
        }
      }
    }
    std::vector<Simplex> triangles;
    {
      std::size_t total = 0;
      for (const auto& row : tri_rows) total += row.size();
      triangles.reserve(total);
      for (auto& row : tri_rows) {
        triangles.insert(triangles.end(), row.begin(), row.end());
        row.clear();
        row.shrink_to_fit();
      }
    }
    sort_simplices(triangles);

    std::vector<Simplex> tets;
    if (max_dim >= 2) {
      std::vector<std::vector<Simplex>> tet_rows(n);
#pragma omp parallel for schedule(dynamic, 4)
      for (int i = 0; i < n; ++i) {
        const auto& ni = nbr[i];
        std::vector<u32> common;
        for (std::size_t a = 0; a < ni.size(); ++a) {
          const u32 j = ni[a];
          common.clear();
          std::set_intersection(ni.begin() + a + 1, ni.end(), nbr[j].begin(),
                                nbr[j].end(), std::back_inserter(common));
          for (std::size_t b = 0; b < common.size(); ++b) {
            const u32 k = common[b];
            for (std::size_t c = b + 1; c < common.size(); ++c) {
              const u32 l = common[c];
              if (d(k, l) > max_eps) continue;
              const double filt =
                  std::max({d(i, j), d(i, k), d(i, l), d(j, k), d(j, l),
                            d(k, l)});
              tet_rows[i].emplace_back(filt, pack4(u32(i), j, k, l));
            }
          }
        }
      }
      std::size_t total = 0;
      for (const auto& row : tet_rows) total += row.size();
      tets.reserve(total);
      for (auto& row : tet_rows) {
        tets.insert(tets.end(), row.begin(), row.end());
        row.clear();
        row.shrink_to_fit();
      }
      sort_simplices(tets);
    }

    // Row index lookups for the boundary maps.
    std::vector<u32> edge_index(static_cast<std::size_t>(n) * n, 0);
    for (u32 e = 0; e < edges.size(); ++e) {
      const u32 i = u32(edges[e].second >> 48);
      const u32 j = u32(edges[e].second >> 32) & 0xFFFFu;
      edge_index[static_cast<std::size_t>(i) * n + j] = e;
    }
    std::unordered_map<u64, u32> tri_index;
    tri_index.reserve(triangles.size() * 2);
    for (u32 t = 0; t < triangles.size(); ++t)
      tri_index.emplace(triangles[t].second, t);

    std::vector<std::uint8_t> cleared_tri(triangles.size(), 0);

    if (max_dim >= 2) {
      // Reduce the tetrahedron boundary first; its pairs are the deaths of
      // dimension-2 classes and clear the corresponding triangle columns.
      const auto facets = [&](u32 c, std::vector<u32>& out) {
        const u64 key = tets[c].second;
        const u32 i = u32(key >> 48), j = u32(key >> 32) & 0xFFFFu,
                  k = u32(key >> 16) & 0xFFFFu, l = u32(key) & 0xFFFFu;
        out = {tri_index.at(pack3(j, k, l)), tri_index.at(pack3(i, k, l)),
               tri_index.at(pack3(i, j, l)), tri_index.at(pack3(i, j, k))};
      };
      const ReductionResult res =
          reduce_columns(tets.size(), triangles.size(), nullptr, facets);
      for (const auto& [row, col] : res.pairs) {
        cleared_tri[row] = 1;
        if (tets[col].first > triangles[row].first)
          diag.features.push_back(
              {2, triangles[row].first, tets[col].first, false});
      }
    }

    {
      const auto facets = [&](u32 c, std::vector<u32>& out) {
        const u64 key = triangles[c].second;
        const u32 i = u32(key >> 48), j = u32(key >> 32) & 0xFFFFu,
                  k = u32(key >> 16) & 0xFFFFu;
        out = {edge_index[static_cast<std::size_t>(j) * n + k],
               edge_index[static_cast<std::size_t>(i) * n + k],
               edge_index[static_cast<std::size_t>(i) * n + j]};
      };
      const ReductionResult res =
          reduce_columns(triangles.size(), edges.size(),
                         max_dim >= 2 ? &cleared_tri : nullptr, facets);
      std::vector<std::uint8_t> edge_killed(edges.size(), 0);
      for (const auto& [row, col] : res.pairs) {
        edge_killed[row] = 1;
        if (triangles[col].first > edges[row].first)
          diag.features.push_back(
              {1, edges[row].first, triangles[col].first, false});
      }
      // Creator edges never killed by a triangle within the cap carry
      // loops that die past the truncation scale.
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (creator[e] && !edge_killed[e])
          diag.features.push_back({1, edges[e].first, kInfDeath, true});
      if (max_dim >= 2)
        for (u32 c : res.positives)
          if (!cleared_tri[c])
            diag.features.push_back(
                {2, triangles[c].first, kInfDeath, true});
    }
  }

  sort_features(diag.features);
  return diag;
}

std::array<int, 3> betti_at(const PersistenceDiagram& diag, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("betti_at needs eps >= 0");
  std::array<int, 3> betti{0, 0, 0};
  for (const Feature& f : diag.features)
    if (f.birth <= eps && eps < f.death) ++betti[f.dim];
  return betti;
}

std::vector<Feature> top_k_features(const PersistenceDiagram& diag, int dim,
                                    int k) {
  std::vector<Feature> out;
  for (const Feature& f : diag.features)
    if (f.dim == dim && std::isfinite(f.death)) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const Feature& a, const Feature& b) {
    if (a.lifetime() != b.lifetime()) return a.lifetime() > b.lifetime();
    return a.birth < b.birth;
  });
  if (k < 0) k = 0;
  if (out.size() > static_cast<std::size_t>(k)) out.resize(k);
  return out;
}

void write_diagram_csv(const PersistenceDiagram& diag,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ComputeError("cannot open for writing: " + path);
  char buf[128];
  if (std::isfinite(diag.truncation_eps)) {
    std::snprintf(buf, sizeof buf, "# truncation_eps=%.17g\n",
                  diag.truncation_eps);
    f << buf;
  }
  f << "dim,birth,death,truncated\n";
  for (const Feature& ft : diag.features) {
    if (std::isfinite(ft.death))
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", ft.dim, ft.birth,
                    ft.death, ft.truncated ? 1 : 0);
    else
      std::snprintf(buf, sizeof buf, "%d,%.17g,inf,%d\n", ft.dim, ft.birth,
                    ft.truncated ? 1 : 0);
    f << buf;
  }
}

PersistenceDiagram read_diagram_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open diagram file: " + path);
  PersistenceDiagram diag;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("truncation_eps=");
      if (pos != std::string::npos)
        diag.truncation_eps = std::stod(line.substr(pos + 15));
      continue;
    }
    if (!header_seen) {
      if (line.rfind("dim,", 0) != 0)
        throw ValidationError("diagram CSV is missing its header row");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    Feature ft;
    std::getline(ss, tok, ',');
    ft.dim = std::stoi(tok);
    std::getline(ss, tok, ',');
    ft.birth = std::stod(tok);
    std::getline(ss, tok, ',');
    ft.death = (tok == "inf") ? kInfDeath : std::stod(tok);
    std::getline(ss, tok, ',');
    ft.truncated = (std::stoi(tok) != 0);
    diag.features.push_back(ft);
  }
  if (!header_seen) throw ValidationError("diagram CSV is empty: " + path);
  return diag;
}

}  // namespace sonartda
