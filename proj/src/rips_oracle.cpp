#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "sonartda/rips.hpp"

// Brute-force persistence used to verify the production engine.  Everything
// here is deliberately unoptimized: the full simplex list is enumerated with
// no distance cutoff, stored explicitly, and reduced in one global pass.

namespace sonartda {

namespace {

struct OracleSimplex {
  double filt;
  int dim;
  std::array<int, 4> verts;  // ascending; unused slots -1

  bool operator<(const OracleSimplex& o) const {
    if (filt != o.filt) return filt < o.filt;
    if (dim != o.dim) return dim < o.dim;
    return verts < o.verts;
  }
};

double simplex_filtration(const DistanceMatrix& d,
                          const std::array<int, 4>& v, int dim) {
  double m = 0.0;
  for (int a = 0; a <= dim; ++a)
    for (int b = a + 1; b <= dim; ++b) m = std::max(m, d(v[a], v[b]));
  return m;
}

}  // namespace

PersistenceDiagram naive_rips_oracle(const DistanceMatrix& d, int max_dim,
                                     double max_eps) {
  if (max_dim < 0 || max_dim > 2)
    throw ValidationError("naive_rips_oracle supports max_dim 0, 1 or 2");
  if (!(max_eps > 0.0)) throw ValidationError("max_eps must be > 0");
  const int n = d.size();
  if (n > 12)
    throw ValidationError(
        "naive_rips_oracle enumerates the full complex and refuses n > 12");

  const int top_dim = std::min(max_dim + 1, n - 1);
  std::vector<OracleSimplex> simplices;
  std::array<int, 4> v{-1, -1, -1, -1};
  for (int i = 0; i < n; ++i) {
    v = {i, -1, -1, -1};
    simplices.push_back({0.0, 0, v});
    if (top_dim < 1) continue;
    for (int j = i + 1; j < n; ++j) {
      v = {i, j, -1, -1};
      simplices.push_back({simplex_filtration(d, v, 1), 1, v});
      if (top_dim < 2) continue;
      for (int k = j + 1; k < n; ++k) {
        v = {i, j, k, -1};
        simplices.push_back({simplex_filtration(d, v, 2), 2, v});
        if (top_dim < 3) continue;
        for (int l = k + 1; l < n; ++l) {
          v = {i, j, k, l};
          simplices.push_back({simplex_filtration(d, v, 3), 3, v});
        }
      }
    }
  }
  std::sort(simplices.begin(), simplices.end());

  std::map<std::pair<int, std::array<int, 4>>, int> index_of;
  for (std::size_t s = 0; s < simplices.size(); ++s)
    index_of[{simplices[s].dim, simplices[s].verts}] = static_cast<int>(s);

  // Full boundary-matrix reduction over Z/2, no clearing, no shortcuts.
  const int m = static_cast<int>(simplices.size());
  std::vector<int> pivot_owner(m, -1);
  std::vector<std::vector<int>> columns(m);
  std::vector<int> paired_with(m, -1);
  for (int c = 0; c < m; ++c) {
    const OracleSimplex& s = simplices[c];
    std::vector<int> col;
    for (int drop = 0; drop <= s.dim && s.dim > 0; ++drop) {
      std::array<int, 4> facet{-1, -1, -1, -1};
      int w = 0;
      for (int a = 0; a <= s.dim; ++a)
        if (a != drop) facet[w++] = s.verts[a];
      col.push_back(index_of.at({s.dim - 1, facet}));
    }
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      const int r = col.back();
      if (pivot_owner[r] < 0) {
        pivot_owner[r] = c;
        paired_with[r] = c;
        break;
      }
      std::vector<int> merged;
      const std::vector<int>& other = columns[pivot_owner[r]];
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                    other.end(), std::back_inserter(merged));
      col.swap(merged);
    }
    columns[c] = col;
  }

  PersistenceDiagram diag;
  diag.truncation_eps = max_eps;
  for (int s = 0; s < m; ++s) {
    const OracleSimplex& sx = simplices[s];
    if (sx.dim > max_dim) continue;
    if (!columns[s].empty()) continue;  // negative column, not a creator
    const int killer = paired_with[s];
    double birth = sx.filt;
    double death = killer >= 0 ? simplices[killer].filt : kInfDeath;
    if (death <= birth && killer >= 0) continue;  // zero persistence
    if (birth > max_eps) continue;
    bool truncated = false;
    if (std::isfinite(death) && death > max_eps) {
      death = kInfDeath;
      truncated = true;
    } else if (!std::isfinite(death) && sx.dim >= 1) {
      truncated = true;
    }
    diag.features.push_back({sx.dim, birth, death, truncated});
  }

  std::sort(diag.features.begin(), diag.features.end(),
            [](const Feature& a, const Feature& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              if (a.death != b.death) return a.death < b.death;
              return a.truncated < b.truncated;
            });
  return diag;
}

}  // namespace sonartda
