#include "sonartda/echo_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sonartda {

namespace {

double row_sup_norm(const SignalMap& map, int i) {
  double m = 0.0;
  for (const Complex& z : map.row(i)) m = std::max(m, std::abs(z.real()));
  return m;
}

double row_l2(const SignalMap& map, int a, int b) {
  double s = 0.0;
  const auto ra = map.row(a);
  const auto rb = map.row(b);
  for (int q = 0; q < map.channels(); ++q) {
    const double diff = ra[q].real() - rb[q].real();
    s += diff * diff;
  }
  return std::sqrt(s);
}

double row_norm(const SignalMap& map, int a) {
  double s = 0.0;
  for (const Complex& z : map.row(a)) s += z.real() * z.real();
  return std::sqrt(s);
}

}  // namespace

std::vector<EchoSupport> detect_prominent_echos(const SignalMap& map,
                                                double threshold_fraction) {
  if (map.domain().kind() != DomainKind::kCircle)
    throw ValidationError("echo detection requires a circle-domain map");
  if (!map.is_real())
    throw ValidationError("echo detection requires a real map");
  if (!(threshold_fraction > 0.0) || !(threshold_fraction < 1.0))
    throw ValidationError("threshold fraction must lie in (0, 1)");

  const int n = map.domain().count0();
  std::vector<double> trace(n);
  double global_max = 0.0;
  for (int i = 0; i < n; ++i) {
    trace[i] = row_sup_norm(map, i);
    global_max = std::max(global_max, trace[i]);
  }
  if (global_max == 0.0) return {};
  const double threshold = threshold_fraction * global_max;

  std::vector<std::uint8_t> above(n);
  for (int i = 0; i < n; ++i) above[i] = trace[i] > threshold ? 1 : 0;

  // Collect maximal runs; start scanning just past a below-threshold gap so
  // a run straddling the 0/360 wrap comes out as one interval.
  std::vector<EchoSupport> echos;
  int scan_start = 0;
  while (scan_start < n && above[scan_start]) ++scan_start;
  if (scan_start == n) {
    // Everything is above threshold: one echo covering the full circle.
    scan_start = 0;
  }

  const double step = 360.0 / n;
  int i = 0;
  while (i < n) {
    const int idx = (scan_start + i) % n;
    if (!above[idx]) {
      ++i;
      continue;
    }
    int len = 0;
    while (len < n && above[(idx + len) % n]) ++len;

    EchoSupport echo;
    echo.start_index = idx;
    echo.length = len;
    echo.start_deg = idx * step;
    echo.end_deg = std::fmod((idx + len) * step, 360.0);

    double sigma = 0.0;
    double peak_angle = 360.0;
    for (int m = 0; m < len; ++m) {
      const int g = (idx + m) % n;
      const double angle = g * step;
      if (trace[g] > sigma) {
        sigma = trace[g];
        peak_angle = angle;
      } else if (trace[g] == sigma && angle < peak_angle) {
        peak_angle = angle;
      }
    }
    echo.cross_section = sigma;
    echo.peak_angle_deg = peak_angle;

    // Length of the closed codomain polyline, closed through the origin.
    double length = row_norm(map, idx);
    for (int m = 1; m < len; ++m)
      length += row_l2(map, (idx + m - 1) % n, (idx + m) % n);
    length += row_norm(map, (idx + len - 1) % n);
    echo.loop_length = length;

    echos.push_back(echo);
    i += len;
  }

  std::sort(echos.begin(), echos.end(),
            [](const EchoSupport& a, const EchoSupport& b) {
              return a.peak_angle_deg < b.peak_angle_deg;
            });
  return echos;
}

std::array<int, 3> expected_betti(int num_echos, int domain_dim) {
  if (num_echos < 0 || domain_dim < 1 || domain_dim > 2)
    throw ValidationError("expected_betti needs num_echos >= 0, dim 1 or 2");
  std::array<int, 3> b{1, 0, 0};
  b[domain_dim] = num_echos;
  return b;
}

std::vector<DeathBoundVerdict> check_death_bound(
    const std::vector<EchoSupport>& echos, const PersistenceDiagram& diag,
    int dim, double sampling_tolerance) {
  if (!(sampling_tolerance >= 0.0) || sampling_tolerance >= 1.0)
    throw ValidationError("sampling tolerance must lie in [0, 1)");

  std::vector<EchoSupport> sorted = echos;
  std::sort(sorted.begin(), sorted.end(),
            [](const EchoSupport& a, const EchoSupport& b) {
              return a.cross_section > b.cross_section;
            });

  // Candidate features ranked by lifetime; a truncated feature outlives
  // everything finite by definition.
  std::vector<Feature> feats;
  for (const Feature& f : diag.features)
    if (f.dim == dim) feats.push_back(f);
  std::sort(feats.begin(), feats.end(), [](const Feature& a, const Feature& b) {
    const bool at = !std::isfinite(a.death);
    const bool bt = !std::isfinite(b.death);
    if (at != bt) return at;
    if (at && bt) return a.birth < b.birth;
    if (a.lifetime() != b.lifetime()) return a.lifetime() > b.lifetime();
    return a.birth < b.birth;
  });

  std::vector<DeathBoundVerdict> verdicts;
  for (std::size_t e = 0; e < sorted.size(); ++e) {
    DeathBoundVerdict v;
    v.cross_section = sorted[e].cross_section;
    v.bound = 0.5 * sorted[e].cross_section * (1.0 - sampling_tolerance);
    if (e < feats.size()) {
      const Feature& f = feats[e];
      v.matched_truncated = f.truncated;
      if (std::isfinite(f.death)) {
        v.matched_death = f.death;
        v.pass = f.death >= v.bound;
      } else {
        v.matched_death = std::numeric_limits<double>::quiet_NaN();
        v.pass = diag.truncation_eps >= v.bound;
      }
    } else {
      v.matched_death = std::numeric_limits<double>::quiet_NaN();
      v.pass = false;
    }
    verdicts.push_back(v);
  }
  return verdicts;
}

bool injectivity_condition(int num_scatterers, int num_wavenumbers,
                           int spatial_dim) {
  if (num_scatterers <= 0 || num_wavenumbers <= 0 || spatial_dim <= 0)
    throw ValidationError("injectivity_condition needs positive arguments");
  return 2 * std::min(num_scatterers, num_wavenumbers) > spatial_dim;
}

int count_threshold_regions(const SignalMap& map, double threshold,
                            bool above) {
  if (map.domain().kind() != DomainKind::kSphereGrid)
    throw ValidationError("region counting requires a sphere-grid map");
  if (map.channels() != 1 || !map.is_real())
    throw ValidationError("region counting requires a single real channel");
  const DomainDescriptor& dom = map.domain();
  const int na = dom.count0();
  const int ne = dom.count1();

  const auto in_set = [&](int ia, int ie) {
    const double v = map.at(dom.index_of(ia, ie), 0).real();
    return above ? v > threshold : v < threshold;
  };

  std::vector<int> comp(static_cast<std::size_t>(dom.grid_size()), -1);
  int regions = 0;
  std::vector<std::pair<int, int>> stack;
  for (int ia = 0; ia < na; ++ia) {
    for (int ie = 0; ie < ne; ++ie) {
      if (!in_set(ia, ie) || comp[dom.index_of(ia, ie)] >= 0) continue;
      stack.push_back({ia, ie});
      comp[dom.index_of(ia, ie)] = regions;
      while (!stack.empty()) {
        const auto [ca, ce] = stack.back();
        stack.pop_back();
        const std::pair<int, int> nbrs[4] = {{(ca + 1) % na, ce},
                                             {(ca + na - 1) % na, ce},
                                             {ca, ce + 1},
                                             {ca, ce - 1}};
        for (const auto& [xa, xe] : nbrs) {
          if (xe < 0 || xe >= ne) continue;
          const int id = dom.index_of(xa, xe);
          if (comp[id] < 0 && in_set(xa, xe)) {
            comp[id] = regions;
            stack.push_back({xa, xe});
          }
        }
      }
      ++regions;
    }
  }
  return regions;
}

std::vector<SelfIntersection> self_intersection_scan(const PointCloud& cloud,
                                                     double codomain_tol,
                                                     double domain_sep_deg) {
  if (!cloud.has_labels() || cloud.label_dim() != 1)
    throw ValidationError("self-intersection scan needs circle-angle labels");
  if (!(codomain_tol > 0.0) || !(domain_sep_deg > 0.0))
    throw ValidationError("tolerances must be positive");

  const int n = cloud.size();
  std::vector<double> norms(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (double c : cloud.point(i)) s += c * c;
    norms[i] = std::sqrt(s);
  }

  std::vector<SelfIntersection> hits;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double da =
          std::abs(cloud.labels()[i][0] - cloud.labels()[j][0]);
      const double circ = std::min(da, 360.0 - da);
      if (circ <= domain_sep_deg) continue;
      double s = 0.0;
      const auto pi = cloud.point(i);
      const auto pj = cloud.point(j);
      for (int c = 0; c < cloud.ambient_dim(); ++c) {
        const double diff = pi[c] - pj[c];
        s += diff * diff;
      }
      const double dist = std::sqrt(s);
      if (dist < codomain_tol)
        hits.push_back({cloud.labels()[i][0], cloud.labels()[j][0], dist,
                        std::min(norms[i], norms[j])});
    }
  }
  return hits;
}

}  // namespace sonartda
