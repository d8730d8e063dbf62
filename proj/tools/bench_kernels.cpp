// Wall-clock comparison of the OpenMP kernels against their serial
// reference implementations, plus the engine-vs-oracle cross check timing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sonartda/embedding.hpp"
#include "sonartda/rips.hpp"
#include "sonartda/rng.hpp"
#include "sonartda/scatter.hpp"

namespace {

using namespace sonartda;

double time_ms(const std::function<void()>& body, int reps) {
  // One warmup, then best of reps.
  body();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms);
}

PointCloud random_cloud(int n, int dim, std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n * dim; ++i)
    coords.push_back(rng.uniform(static_cast<std::uint64_t>(i)));
  return {dim, std::move(coords)};
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serial code\n");
#endif

  {
    const Scene scene = pipe_scene(1.0, 0.1, 40, {1.0, 0.0});
    std::vector<double> ks;
    for (int q = 0; q < 100; ++q) ks.push_back(18.0 + 12.0 * q / 99.0);
    const CollectionGeometry geom(DomainDescriptor::circle(720), 3.0, ks);
    report("csas_collect",
           time_ms([&] { csas_collect_serial(scene, geom); }, 3),
           time_ms([&] { csas_collect(scene, geom); }, 3));
  }

  {
    const Scene scene({{{0.0, 0.0, 0.0}, {1.0, 0.0}},
                       {{2.0, 0.0, 0.0}, {-0.5, 0.0}}});
    const CollectionGeometry geom(DomainDescriptor::sphere_grid(180, 90), 4.0,
                                  {kPi / 2.0});
    report("sphere_collect",
           time_ms([&] { sphere_collect_serial(scene, geom); }, 3),
           time_ms([&] { sphere_collect(scene, geom); }, 3));
  }

  {
    const PointCloud cloud = random_cloud(1500, 16, 7);
    report("distance_matrix",
           time_ms([&] { distance_matrix_serial(cloud, MetricTag::kEuclidean); },
                   3),
           time_ms([&] { distance_matrix(cloud, MetricTag::kEuclidean); }, 3));
  }

  {
    // Rips engine throughput on a noisy circle (enumeration is the
    // parallel part; the reduction itself is sequential by contract).
    const int n = 400;
    const CounterRng rng(11);
    std::vector<double> coords;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      coords.push_back(std::cos(t) + 0.05 * (rng.uniform(2 * i) - 0.5));
      coords.push_back(std::sin(t) + 0.05 * (rng.uniform(2 * i + 1) - 0.5));
    }
    const PointCloud cloud(2, std::move(coords));
    const DistanceMatrix d = distance_matrix(cloud, MetricTag::kEuclidean);
    const double ms = time_ms([&] { rips_persistence(d, 1, d.diameter()); }, 3);
    std::printf("%-24s %9.2f ms (H1, n=%d, full filtration)\n",
                "rips_persistence", ms, n);
  }

  return 0;
}
