#include "sonartda/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sonartda {

namespace {

// Cyclic Jacobi eigen-decomposition of a symmetric m x m matrix (row-major,
// destroyed).  V receives the eigenvectors as columns.  Deterministic:
// fixed sweep order, no pivot search.
void jacobi_eigen(std::vector<double>& a, int m, std::vector<double>& v,
                  std::vector<double>& evals) {
  v.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i) * m + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double tol = 1e-12 * std::max(1.0, frob);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) {
        const double x = a[static_cast<std::size_t>(p) * m + q];
        s += 2.0 * x * x;
      }
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = a[static_cast<std::size_t>(p) * m + q];
        if (apq == 0.0) continue;
        const double app = a[static_cast<std::size_t>(p) * m + p];
        const double aqq = a[static_cast<std::size_t>(q) * m + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < m; ++r) {
          const double arp = a[static_cast<std::size_t>(r) * m + p];
          const double arq = a[static_cast<std::size_t>(r) * m + q];
          a[static_cast<std::size_t>(r) * m + p] = c * arp - s * arq;
          a[static_cast<std::size_t>(r) * m + q] = s * arp + c * arq;
        }
        for (int cidx = 0; cidx < m; ++cidx) {
          const double apc = a[static_cast<std::size_t>(p) * m + cidx];
          const double aqc = a[static_cast<std::size_t>(q) * m + cidx];
          a[static_cast<std::size_t>(p) * m + cidx] = c * apc - s * aqc;
          a[static_cast<std::size_t>(q) * m + cidx] = s * apc + c * aqc;
        }
        for (int r = 0; r < m; ++r) {
          const double vrp = v[static_cast<std::size_t>(r) * m + p];
          const double vrq = v[static_cast<std::size_t>(r) * m + q];
          v[static_cast<std::size_t>(r) * m + p] = c * vrp - s * vrq;
          v[static_cast<std::size_t>(r) * m + q] = s * vrp + c * vrq;
        }
      }
    }
  }

  evals.resize(m);
  for (int i = 0; i < m; ++i)
    evals[i] = a[static_cast<std::size_t>(i) * m + i];
}

// Largest-magnitude component positive; first index wins ties.
void fix_sign(std::vector<double>& w) {
  std::size_t arg = 0;
  double best = 0.0;
  for (std::size_t c = 0; c < w.size(); ++c)
    if (std::abs(w[c]) > best) {
      best = std::abs(w[c]);
      arg = c;
    }
  if (w[arg] < 0.0)
    for (double& x : w) x = -x;
}

}  // namespace

PointCloud delay_embed(const SignalMap& map, const DelayConfig& config) {
  if (map.domain().kind() != DomainKind::kCircle)
    throw ValidationError("delay_embed requires a circle-domain map");
  if (config.offsets_deg.empty())
    throw ValidationError("delay_embed needs at least one offset");
  const int n = map.domain().count0();

  std::vector<int> shifts;
  shifts.reserve(config.offsets_deg.size());
  for (double off : config.offsets_deg) {
    if (!(off >= 0.0) || off >= 360.0)
      throw ValidationError("delay offsets must lie in [0, 360) degrees");
    const double samples = off * n / 360.0;
    const double rounded = std::round(samples);
    if (std::abs(samples - rounded) > 1e-9)
      throw ValidationError("delay offset " + std::to_string(off) +
                            " deg does not land on the sample grid");
    shifts.push_back(static_cast<int>(rounded) % n);
  }

  // Width of one lag after reduction.
  SignalMap reduced = config.reducer
                          ? magnitude_channel(map, *config.reducer)
                          : map;
  const bool complex_data = !reduced.is_real();
  const int width = reduced.channels() * (complex_data ? 2 : 1);
  const int dim = static_cast<int>(shifts.size()) * width;

  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(n) * dim);
  std::vector<std::array<double, 2>> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    for (int s : shifts) {
      const auto row = reduced.row((i + s) % n);
      for (const Complex& z : row) {
        coords.push_back(z.real());
        if (complex_data) coords.push_back(z.imag());
      }
    }
    labels.push_back({360.0 * i / n, 0.0});
  }
  return {dim, std::move(coords), std::move(labels), 1};
}

PointCloud tangent_map(const SignalMap& map) {
  if (map.domain().kind() != DomainKind::kSphereGrid)
    throw ValidationError("tangent_map requires a sphere-grid map");
  if (map.channels() != 1 || !map.is_real())
    throw ValidationError("tangent_map requires a single real channel");

  const DomainDescriptor& dom = map.domain();
  const int na = dom.count0();
  const int ne = dom.count1();
  const double dth = 2.0 * kPi / na;   // azimuth step, radians
  const double dph = kPi / ne;         // elevation step, radians

  const auto u = [&](int ia, int ie) {
    return map.at(dom.index_of(ia, ie), 0).real();
  };

  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(dom.grid_size()) * 3);
  std::vector<std::array<double, 2>> labels;
  labels.reserve(dom.grid_size());
  const auto angles = grid_points(dom);

  for (int ia = 0; ia < na; ++ia) {
    for (int ie = 0; ie < ne; ++ie) {
      const double val = u(ia, ie);
      const double dzdth =
          (u((ia + 1) % na, ie) - u((ia + na - 1) % na, ie)) / (2.0 * dth);
      double dzdph;
      if (ie > 0 && ie < ne - 1) {
        dzdph = (u(ia, ie + 1) - u(ia, ie - 1)) / (2.0 * dph);
      } else if (ne == 2) {
        dzdph = (u(ia, 1) - u(ia, 0)) / dph;
      } else if (ie == 0) {
        dzdph = (-3.0 * u(ia, 0) + 4.0 * u(ia, 1) - u(ia, 2)) / (2.0 * dph);
      } else {
        dzdph = (3.0 * u(ia, ne - 1) - 4.0 * u(ia, ne - 2) + u(ia, ne - 3)) /
                (2.0 * dph);
      }
      coords.push_back(val);
      coords.push_back(dzdph);
      coords.push_back(dzdth);
      labels.push_back(angles[dom.index_of(ia, ie)]);
    }
  }
  return {3, std::move(coords), std::move(labels), 2};
}

PointCloud pca_project(const PointCloud& cloud, int out_dim) {
  const int n = cloud.size();
  const int d = cloud.ambient_dim();
  if (n < 1) throw ValidationError("pca_project needs a nonempty cloud");
  if (out_dim < 1 || out_dim > d)
    throw ValidationError("pca_project needs 1 <= out_dim <= ambient_dim");

  std::vector<double> centered(cloud.coords());
  for (int c = 0; c < d; ++c) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i)
      mean += centered[static_cast<std::size_t>(i) * d + c];
    mean /= n;
    for (int i = 0; i < n; ++i)
      centered[static_cast<std::size_t>(i) * d + c] -= mean;
  }

  // Principal directions, each a unit d-vector, by descending eigenvalue.
  // For wide data (d > n) the same spectrum comes from the n x n Gram
  // matrix of the centered rows, which keeps the Jacobi problem small.
  std::vector<std::vector<double>> dirs;
  std::vector<double> evals_sorted;
  const bool use_gram = d > n;
  const int m = use_gram ? n : d;

  std::vector<double> sym(static_cast<std::size_t>(m) * m, 0.0);
  if (use_gram) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c)
          s += centered[static_cast<std::size_t>(i) * d + c] *
               centered[static_cast<std::size_t>(j) * d + c];
        sym[static_cast<std::size_t>(i) * m + j] = s;
        sym[static_cast<std::size_t>(j) * m + i] = s;
      }
  } else {
#pragma omp parallel for schedule(static)
    for (int p = 0; p < m; ++p)
      for (int q = p; q < m; ++q) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          s += centered[static_cast<std::size_t>(i) * d + p] *
               centered[static_cast<std::size_t>(i) * d + q];
        sym[static_cast<std::size_t>(p) * m + q] = s;
        sym[static_cast<std::size_t>(q) * m + p] = s;
      }
  }

  std::vector<double> vecs, evals;
  jacobi_eigen(sym, m, vecs, evals);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return evals[a] > evals[b]; });
  const double lead = m > 0 ? std::max(evals[order[0]], 0.0) : 0.0;

  for (int r = 0; r < out_dim; ++r) {
    std::vector<double> w(d, 0.0);
    if (r < m && evals[order[r]] > lead * 1e-12 && lead > 0.0) {
      if (use_gram) {
        // direction = X^T u / |X^T u|
        for (int c = 0; c < d; ++c) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            s += centered[static_cast<std::size_t>(i) * d + c] *
                 vecs[static_cast<std::size_t>(i) * m + order[r]];
          w[c] = s;
        }
        double nw = 0.0;
        for (double x : w) nw += x * x;
        nw = std::sqrt(nw);
        if (nw > 0.0)
          for (double& x : w) x /= nw;
      } else {
        for (int c = 0; c < d; ++c)
          w[c] = vecs[static_cast<std::size_t>(c) * m + order[r]];
      }
      fix_sign(w);
    }
    dirs.push_back(std::move(w));
    evals_sorted.push_back(r < m ? evals[order[r]] : 0.0);
  }

  std::vector<double> out(static_cast<std::size_t>(n) * out_dim, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < out_dim; ++r) {
      double s = 0.0;
      for (int c = 0; c < d; ++c)
        s += centered[static_cast<std::size_t>(i) * d + c] * dirs[r][c];
      out[static_cast<std::size_t>(i) * out_dim + r] = s;
    }

  if (cloud.has_labels())
    return {out_dim, std::move(out), cloud.labels(), cloud.label_dim()};
  return {out_dim, std::move(out)};
}

}  // namespace sonartda
