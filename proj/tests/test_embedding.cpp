#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sonartda/embedding.hpp"
#include "sonartda/rng.hpp"

using namespace sonartda;

namespace {

SignalMap real_circle_map(const std::vector<double>& values) {
  std::vector<Complex> samples;
  for (double v : values) samples.emplace_back(v, 0.0);
  return {DomainDescriptor::circle(static_cast<int>(values.size())), 1,
          std::move(samples)};
}

std::vector<std::vector<double>> point_list(const PointCloud& cloud) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

}  // namespace

TEST_CASE("delay embedding of a constant map") {
  const SignalMap map = real_circle_map(std::vector<double>(16, 2.5));
  const PointCloud cloud = delay_embed(map, {{0.0, 45.0, 90.0}, {}});
  CHECK(cloud.ambient_dim() == 3);
  REQUIRE(cloud.size() == 16);
  for (int i = 0; i < cloud.size(); ++i)
    for (double c : cloud.point(i)) CHECK(c == 2.5);
}

TEST_CASE("sine map with quarter-turn lag traces the unit circle") {
  const int n = 360;
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = std::sin(deg_to_rad(i));
  const PointCloud cloud =
      delay_embed(real_circle_map(values), {{0.0, 90.0}, {}});
  CHECK(cloud.ambient_dim() == 2);
  REQUIRE(cloud.size() == n);
  for (int i = 0; i < n; ++i) {
    CHECK(cloud.point(i)[0] ==
          doctest::Approx(std::sin(deg_to_rad(i))).epsilon(1e-12));
    CHECK(cloud.point(i)[1] ==
          doctest::Approx(std::cos(deg_to_rad(i))).epsilon(1e-12));
    CHECK(cloud.labels()[i][0] == doctest::Approx(double(i)));
  }
}

TEST_CASE("lab-style offsets give 360 three-dimensional points") {
  // 360 rows, 8 complex channels, reduced to the per-ping peak magnitude.
  std::vector<Complex> samples;
  const CounterRng rng(5);
  for (int i = 0; i < 360 * 8; ++i)
    samples.emplace_back(rng.uniform(2 * i) - 0.5, rng.uniform(2 * i + 1) - 0.5);
  const SignalMap map(DomainDescriptor::circle(360), 8, samples);
  const PointCloud cloud = delay_embed(
      map, {{0.0, 4.0, 25.0}, ChannelReducer::kMaxMagnitude});
  CHECK(cloud.size() == 360);
  CHECK(cloud.ambient_dim() == 3);
}

TEST_CASE("identity reducer doubles the width only for complex data") {
  std::vector<Complex> samples;
  for (int i = 0; i < 12; ++i)
    samples.emplace_back(std::cos(0.5 * i), std::sin(0.5 * i));
  const SignalMap cmap(DomainDescriptor::circle(12), 1, samples);
  CHECK(delay_embed(cmap, {{0.0, 30.0}, {}}).ambient_dim() == 4);
  const SignalMap rmap = magnitude_channel(cmap, ChannelReducer::kMagnitude);
  CHECK(delay_embed(rmap, {{0.0, 30.0}, {}}).ambient_dim() == 2);
}

TEST_CASE("off-grid offsets are rejected by name") {
  const SignalMap map = real_circle_map(std::vector<double>(100, 1.0));
  try {
    delay_embed(map, {{0.0, 4.5}, {}});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("4.5") != std::string::npos);
  }
  CHECK_THROWS_AS(delay_embed(map, {{}, {}}), ValidationError);
  CHECK_THROWS_AS(delay_embed(map, {{360.0}, {}}), ValidationError);
}

TEST_CASE("trivial single-lag embedding reproduces the raw sequence") {
  std::vector<double> values;
  for (int i = 0; i < 24; ++i) values.push_back(std::sin(0.7 * i) + 0.2 * i);
  const SignalMap map = real_circle_map(values);
  const PointCloud cloud = delay_embed(map, {{0.0}, {}});
  CHECK(cloud.ambient_dim() == 1);
  for (int i = 0; i < 24; ++i) CHECK(cloud.point(i)[0] == values[i]);
}

TEST_CASE("delay embedding commutes with rotation") {
  const int n = 36;
  std::vector<double> values;
  for (int i = 0; i < n; ++i) values.push_back(std::cos(0.9 * i) * (i % 5));
  const SignalMap map = real_circle_map(values);

  const int shift = 7;
  std::vector<double> rotated(n);
  for (int i = 0; i < n; ++i) rotated[i] = values[(i + shift) % n];
  const SignalMap map2 = real_circle_map(rotated);

  const DelayConfig config{{0.0, 10.0, 50.0}, {}};
  auto a = point_list(delay_embed(map, config));
  auto b = point_list(delay_embed(map2, config));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);  // exact multiset equality
}

TEST_CASE("tangent map of a constant field") {
  const SignalMap map(DomainDescriptor::sphere_grid(8, 6), 1,
                      std::vector<Complex>(48, Complex(1.25, 0.0)));
  const PointCloud cloud = tangent_map(map);
  CHECK(cloud.ambient_dim() == 3);
  CHECK(cloud.label_dim() == 2);
  for (int i = 0; i < cloud.size(); ++i) {
    CHECK(cloud.point(i)[0] == 1.25);
    CHECK(cloud.point(i)[1] == 0.0);
    CHECK(cloud.point(i)[2] == 0.0);
  }
}

TEST_CASE("tangent map recovers analytic azimuth derivatives") {
  const DomainDescriptor dom = DomainDescriptor::sphere_grid(90, 45);
  std::vector<Complex> samples(dom.grid_size());
  const auto coords = grid_points(dom);
  for (int i = 0; i < dom.grid_size(); ++i)
    samples[i] = Complex(std::sin(deg_to_rad(coords[i][0])), 0.0);
  const SignalMap map(dom, 1, samples);
  const PointCloud cloud = tangent_map(map);
  const double dth = 2.0 * kPi / 90;
  double max_err = 0.0;
  for (int i = 0; i < cloud.size(); ++i) {
    const double th = deg_to_rad(cloud.labels()[i][0]);
    CHECK(cloud.point(i)[0] == doctest::Approx(std::sin(th)).epsilon(1e-12));
    CHECK(cloud.point(i)[1] == doctest::Approx(0.0).epsilon(1e-12));
    max_err = std::max(max_err, std::abs(cloud.point(i)[2] - std::cos(th)));
  }
  CHECK(max_err <= dth * dth);
}

TEST_CASE("tangent map stencils converge at second order") {
  const auto field_error = [](int na, int ne) {
    const DomainDescriptor dom = DomainDescriptor::sphere_grid(na, ne);
    std::vector<Complex> samples(dom.grid_size());
    const auto coords = grid_points(dom);
    for (int i = 0; i < dom.grid_size(); ++i) {
      const double th = deg_to_rad(coords[i][0]);
      const double ph = deg_to_rad(coords[i][1]);
      samples[i] = Complex(std::sin(2.0 * th) * std::cos(ph), 0.0);
    }
    const PointCloud cloud = tangent_map(SignalMap(dom, 1, samples));
    double max_err = 0.0;
    for (int i = 0; i < cloud.size(); ++i) {
      const double th = deg_to_rad(cloud.labels()[i][0]);
      const double ph = deg_to_rad(cloud.labels()[i][1]);
      const double ref_az = 2.0 * std::cos(2.0 * th) * std::cos(ph);
      const double ref_el = -std::sin(2.0 * th) * std::sin(ph);
      max_err = std::max(max_err, std::abs(cloud.point(i)[2] - ref_az));
      max_err = std::max(max_err, std::abs(cloud.point(i)[1] - ref_el));
    }
    return max_err;
  };
  const double coarse = field_error(40, 20);
  const double fine = field_error(80, 40);
  const double factor = coarse / fine;
  CHECK(factor >= 3.0);
  CHECK(factor <= 5.0);
}

TEST_CASE("tangent map input checks") {
  std::vector<Complex> cx(24, Complex(0.0, 1.0));
  CHECK_THROWS_AS(tangent_map(SignalMap(DomainDescriptor::sphere_grid(6, 4),
                                        1, cx)),
                  ValidationError);
  CHECK_THROWS_AS(
      tangent_map(SignalMap(DomainDescriptor::circle(8), 1,
                            std::vector<Complex>(8, Complex(1, 0)))),
      ValidationError);
  CHECK_THROWS_AS(
      tangent_map(SignalMap(DomainDescriptor::sphere_grid(6, 4), 2,
                            std::vector<Complex>(48, Complex(1, 0)))),
      ValidationError);
}

TEST_CASE("pca projects a planar cloud isometrically") {
  // Points in a 2-plane inside R^5.
  const CounterRng rng(9);
  const std::vector<double> e1{0.5, 0.5, 0.5, 0.5, 0.0};
  const std::vector<double> e2{0.5, -0.5, 0.5, -0.5, 0.0};
  std::vector<double> coords;
  const int n = 40;
  for (int i = 0; i < n; ++i) {
    const double a = 4.0 * rng.uniform(2 * i) - 2.0;
    const double b = 4.0 * rng.uniform(2 * i + 1) - 2.0;
    for (int c = 0; c < 5; ++c)
      coords.push_back(a * e1[c] + b * e2[c] + 0.3);
  }
  const PointCloud cloud(5, std::move(coords));
  const PointCloud projected = pca_project(cloud, 2);
  REQUIRE(projected.size() == n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d_in = 0.0, d_out = 0.0;
      for (int c = 0; c < 5; ++c) {
        const double diff = cloud.point(i)[c] - cloud.point(j)[c];
        d_in += diff * diff;
      }
      for (int c = 0; c < 2; ++c) {
        const double diff = projected.point(i)[c] - projected.point(j)[c];
        d_out += diff * diff;
      }
      CHECK(std::sqrt(d_out) ==
            doctest::Approx(std::sqrt(d_in)).epsilon(1e-9));
    }
}

TEST_CASE("pca of a repeated point is all zeros") {
  std::vector<double> coords;
  for (int i = 0; i < 6; ++i) coords.insert(coords.end(), {1.0, -2.0, 3.0});
  const PointCloud projected = pca_project(PointCloud(3, coords), 2);
  for (int i = 0; i < projected.size(); ++i)
    for (double c : projected.point(i)) CHECK(c == 0.0);
}

TEST_CASE("full-rank pca is a rigid motion") {
  const CounterRng rng(13);
  std::vector<double> coords;
  const int n = 25, d = 4;
  for (int i = 0; i < n * d; ++i) coords.push_back(rng.uniform(i));
  const PointCloud cloud(d, coords);
  const PointCloud projected = pca_project(cloud, d);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d_in = 0.0, d_out = 0.0;
      for (int c = 0; c < d; ++c) {
        const double a = cloud.point(i)[c] - cloud.point(j)[c];
        const double b = projected.point(i)[c] - projected.point(j)[c];
        d_in += a * a;
        d_out += b * b;
      }
      CHECK(std::sqrt(d_out) ==
            doctest::Approx(std::sqrt(d_in)).epsilon(1e-9));
    }
}

TEST_CASE("pca output covariance is diagonal with nonincreasing entries") {
  const CounterRng rng(31);
  std::vector<double> coords;
  const int n = 60, d = 5;
  for (int i = 0; i < n * d; ++i)
    coords.push_back(rng.uniform(i) * (1.0 + (i % d)));
  const PointCloud projected = pca_project(PointCloud(d, coords), d);

  std::vector<double> cov(d * d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        cov[p * d + q] += projected.point(i)[p] * projected.point(i)[q];
  const double lead = cov[0];
  for (int p = 0; p < d; ++p) {
    if (p + 1 < d) CHECK(cov[p * d + p] >= cov[(p + 1) * d + (p + 1)] - 1e-9);
    for (int q = 0; q < d; ++q)
      if (p != q) CHECK(std::abs(cov[p * d + q]) <= 1e-9 * std::max(lead, 1.0));
  }
}

TEST_CASE("pca via the gram dual matches the covariance route") {
  // More columns than rows forces the dual path; embed a low-dimensional
  // cloud in many dims and check isometry of the leading plane.
  const CounterRng rng(17);
  const int n = 12, d = 40;
  std::vector<double> coords(n * d, 0.0);
  for (int i = 0; i < n; ++i) {
    const double a = std::cos(2.0 * kPi * i / n);
    const double b = std::sin(2.0 * kPi * i / n);
    for (int c = 0; c < d; ++c)
      coords[i * d + c] =
          a * std::sin(0.1 * c + 1.0) + b * std::cos(0.2 * c) + 0.05;
  }
  const PointCloud cloud(d, coords);
  const PointCloud projected = pca_project(cloud, 3);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d_in = 0.0, d_out = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = cloud.point(i)[c] - cloud.point(j)[c];
        d_in += diff * diff;
      }
      for (int c = 0; c < 3; ++c) {
        const double diff = projected.point(i)[c] - projected.point(j)[c];
        d_out += diff * diff;
      }
      // The cloud spans exactly two directions, so three components
      // already reproduce every distance.
      CHECK(std::sqrt(d_out) ==
            doctest::Approx(std::sqrt(d_in)).epsilon(1e-9));
    }
}

TEST_CASE("pca argument checks") {
  const PointCloud cloud(2, {0.0, 0.0, 1.0, 1.0});
  CHECK_THROWS_AS(pca_project(cloud, 3), ValidationError);
  CHECK_THROWS_AS(pca_project(cloud, 0), ValidationError);
}
