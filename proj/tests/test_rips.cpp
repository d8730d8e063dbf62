#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sonartda/rips.hpp"
#include "sonartda/rng.hpp"

using namespace sonartda;

namespace {

PointCloud cloud_from(const std::vector<std::vector<double>>& pts) {
  std::vector<double> coords;
  for (const auto& p : pts) coords.insert(coords.end(), p.begin(), p.end());
  return {static_cast<int>(pts[0].size()), std::move(coords)};
}

PointCloud labeled_circle_cloud(const std::vector<std::vector<double>>& pts) {
  std::vector<double> coords;
  std::vector<std::array<double, 2>> labels;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    coords.insert(coords.end(), pts[i].begin(), pts[i].end());
    labels.push_back({360.0 * i / n, 0.0});
  }
  return {static_cast<int>(pts[0].size()), std::move(coords),
          std::move(labels), 1};
}

PointCloud random_cloud(int n, int dim, std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<double> coords;
  for (int i = 0; i < n * dim; ++i)
    coords.push_back(rng.uniform(static_cast<std::uint64_t>(i)));
  return {dim, std::move(coords)};
}

bool same_features(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return a.features == b.features;  // both sorted by construction
}

}  // namespace

TEST_CASE("distance matrix examples") {
  SUBCASE("two points") {
    const auto d = distance_matrix(cloud_from({{0.0, 0.0}, {3.0, 4.0}}),
                                   MetricTag::kEuclidean);
    CHECK(d.size() == 2);
    CHECK(d(0, 1) == 5.0);
    CHECK(d(1, 0) == 5.0);
    CHECK(d(0, 0) == 0.0);
  }
  SUBCASE("unit square corners, euclidean") {
    const auto d = distance_matrix(
        cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), MetricTag::kEuclidean);
    CHECK(d(0, 1) == 1.0);
    CHECK(d(1, 2) == 1.0);
    CHECK(d(0, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("four points on a unit-circumference closed polyline, geodesic") {
    // Square of side 1/4: polyline length 1.
    const auto d = distance_matrix(
        labeled_circle_cloud({{0, 0}, {0.25, 0}, {0.25, 0.25}, {0, 0.25}}),
        MetricTag::kPolylineGeodesic);
    CHECK(d(0, 1) == 0.25);
    CHECK(d(1, 2) == 0.25);
    CHECK(d(2, 3) == 0.25);
    CHECK(d(0, 2) == 0.5);
    CHECK(d(1, 3) == 0.5);
  }
  SUBCASE("geodesic metric requires labels") {
    CHECK_THROWS_AS(distance_matrix(cloud_from({{0, 0}, {1, 0}}),
                                    MetricTag::kPolylineGeodesic),
                    ValidationError);
  }
}

TEST_CASE("rips on two points") {
  const auto d =
      distance_matrix(cloud_from({{0.0}, {2.5}}), MetricTag::kEuclidean);
  const auto diag = rips_persistence(d, 0, 10.0);
  REQUIRE(diag.features.size() == 2);
  CHECK(diag.features[0] == Feature{0, 0.0, 2.5, false});
  CHECK(diag.features[1].death == kInfDeath);
  CHECK_FALSE(diag.features[1].truncated);
}

TEST_CASE("rips on the unit square matches the oracle") {
  const auto d = distance_matrix(
      cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), MetricTag::kEuclidean);
  const auto diag = rips_persistence(d, 1, 2.0);
  const auto oracle = naive_rips_oracle(d, 1, 2.0);
  CHECK(same_features(diag, oracle));

  std::vector<Feature> h1;
  for (const auto& f : diag.features)
    if (f.dim == 1) h1.push_back(f);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == 1.0);
  CHECK(h1[0].death == std::sqrt(2.0));

  SUBCASE("betti numbers across scales") {
    CHECK(betti_at(diag, 0.0) == std::array<int, 3>{4, 0, 0});
    CHECK(betti_at(diag, 1.2) == std::array<int, 3>{1, 1, 0});
    CHECK(betti_at(diag, 1.5) == std::array<int, 3>{1, 0, 0});
  }
  SUBCASE("top-k features") {
    const auto top = top_k_features(diag, 1, 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].birth == 1.0);
    CHECK(top[0].death == std::sqrt(2.0));
    CHECK(top_k_features(diag, 2, 4).empty());
    CHECK(top_k_features(diag, 1, 0).empty());
  }
}

TEST_CASE("three collinear points have no loops") {
  const auto d = distance_matrix(cloud_from({{0.0}, {1.0}, {2.0}}),
                                 MetricTag::kEuclidean);
  const auto diag = rips_persistence(d, 1, 5.0);
  for (const auto& f : diag.features) CHECK(f.dim == 0);
  CHECK(same_features(diag, naive_rips_oracle(d, 1, 5.0)));
}

TEST_CASE("single point") {
  const auto d =
      distance_matrix(cloud_from({{1.0, 2.0}}), MetricTag::kEuclidean);
  const auto diag = rips_persistence(d, 0, 1.0);
  REQUIRE(diag.features.size() == 1);
  CHECK(diag.features[0] == Feature{0, 0.0, kInfDeath, false});
  CHECK(same_features(diag, naive_rips_oracle(d, 0, 1.0)));
}

TEST_CASE("oracle refuses large inputs") {
  CHECK_THROWS_AS(naive_rips_oracle(distance_matrix(random_cloud(13, 2, 3),
                                                    MetricTag::kEuclidean),
                                    1, 1.0),
                  ValidationError);
}

TEST_CASE("engine equals oracle on seeded random clouds") {
  // Full filtration and truncated runs, all dimensions.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const auto cloud = random_cloud(n, 3, seed + 100);
    const auto d = distance_matrix(cloud, MetricTag::kEuclidean);
    const double diam = d.diameter();
    for (const double eps : {diam, 0.6 * diam}) {
      const auto diag = rips_persistence(d, 2, eps);
      const auto oracle = naive_rips_oracle(d, 2, eps);
      REQUIRE_MESSAGE(same_features(diag, oracle), "seed ", seed, " eps ",
                      eps);
    }
  }
}

TEST_CASE("diagram well-formedness on a random cloud") {
  const auto cloud = random_cloud(24, 3, 77);
  const auto d = distance_matrix(cloud, MetricTag::kEuclidean);
  const auto diag = rips_persistence(d, 2, d.diameter());
  int essential_h0 = 0;
  for (const auto& f : diag.features) {
    CHECK(f.birth <= f.death);
    if (f.dim == 0) {
      CHECK(f.birth == 0.0);
      if (!std::isfinite(f.death)) ++essential_h0;
    } else {
      // At full scale every higher class dies.
      CHECK(std::isfinite(f.death));
    }
  }
  CHECK(essential_h0 == 1);
}

TEST_CASE("scale equivariance is exact") {
  const auto cloud = random_cloud(16, 3, 5);
  const auto base = distance_matrix(cloud, MetricTag::kEuclidean);
  const double lambda = 3.7;
  std::vector<double> scaled;
  scaled.reserve(static_cast<std::size_t>(base.size()) * base.size());
  for (int i = 0; i < base.size(); ++i)
    for (int j = 0; j < base.size(); ++j) scaled.push_back(lambda * base(i, j));
  const DistanceMatrix d_scaled(base.size(), std::move(scaled),
                                MetricTag::kEuclidean);

  const auto a = rips_persistence(base, 2, base.diameter());
  const auto b = rips_persistence(d_scaled, 2, d_scaled.diameter());
  REQUIRE(a.features.size() == b.features.size());
  for (std::size_t i = 0; i < a.features.size(); ++i) {
    CHECK(b.features[i].dim == a.features[i].dim);
    CHECK(b.features[i].birth == lambda * a.features[i].birth);
    if (std::isfinite(a.features[i].death))
      CHECK(b.features[i].death == lambda * a.features[i].death);
    else
      CHECK_FALSE(std::isfinite(b.features[i].death));
  }
}

TEST_CASE("perturbation stability of the dominant loop") {
  const int n = 30;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  const auto d0 = distance_matrix(cloud_from(pts), MetricTag::kEuclidean);
  const auto diag0 = rips_persistence(d0, 1, d0.diameter());
  const auto top0 = top_k_features(diag0, 1, 2);
  REQUIRE(top0.size() >= 1);

  const double delta = 0.01;
  REQUIRE(top0[0].lifetime() >= 10.0 * delta);
  if (top0.size() > 1) REQUIRE(top0[1].lifetime() <= top0[0].lifetime() / 3.0);

  const CounterRng rng(42);
  auto pts2 = pts;
  for (int i = 0; i < n; ++i) {
    // Random direction, magnitude <= delta.
    double zx = 0.0, zy = 0.0;
    rng.normal_pair(static_cast<std::uint64_t>(i), zx, zy);
    const double len = std::hypot(zx, zy);
    const double mag = delta * rng.uniform(1000 + i);
    if (len > 0) {
      pts2[i][0] += mag * zx / len;
      pts2[i][1] += mag * zy / len;
    }
  }
  const auto d1 = distance_matrix(cloud_from(pts2), MetricTag::kEuclidean);
  const auto diag1 = rips_persistence(d1, 1, d1.diameter());
  const auto top1 = top_k_features(diag1, 1, 1);
  REQUIRE(top1.size() == 1);
  CHECK(std::abs(top1[0].birth - top0[0].birth) <= 2.0 * delta);
  CHECK(std::abs(top1[0].death - top0[0].death) <= 2.0 * delta);
}

TEST_CASE("truncation flags features that outlive the cap") {
  const int n = 24;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  const auto d = distance_matrix(cloud_from(pts), MetricTag::kEuclidean);
  // The loop on a unit circle dies near sqrt(3); cap well below that.
  const auto diag = rips_persistence(d, 1, 0.9);
  CHECK(diag.truncation_eps == 0.9);
  int truncated_h1 = 0;
  for (const auto& f : diag.features)
    if (f.dim == 1 && f.truncated) {
      ++truncated_h1;
      CHECK_FALSE(std::isfinite(f.death));
    }
  CHECK(truncated_h1 == 1);
  // Alive at eps below the cap even though its death was never observed.
  CHECK(betti_at(diag, 0.5)[1] == 1);

  // The truncated run agrees with the oracle's truncation semantics on a
  // subsample the oracle can afford.
  std::vector<std::vector<double>> sub(pts.begin(), pts.begin() + 12);
  const auto ds = distance_matrix(cloud_from(sub), MetricTag::kEuclidean);
  CHECK(same_features(rips_persistence(ds, 1, 0.9),
                      naive_rips_oracle(ds, 1, 0.9)));
}

TEST_CASE("geodesic circle: single loop with death at one third") {
  // n points on a regular n-gon scaled so the polyline circumference is 1.
  const int n = 60;
  std::vector<std::vector<double>> pts;
  const double side = 1.0 / n;
  const double r = side / (2.0 * std::sin(kPi / n));
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  const auto d = distance_matrix(labeled_circle_cloud(pts),
                                 MetricTag::kPolylineGeodesic);
  CHECK(d.diameter() == doctest::Approx(0.5).epsilon(1e-12));
  const auto diag = rips_persistence(d, 1, 0.51);
  const auto h1 = top_k_features(diag, 1, 8);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == doctest::Approx(1.0 / 60.0).epsilon(1e-12));
  CHECK(h1[0].death == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("max_eps and max_dim preconditions") {
  const auto d = distance_matrix(random_cloud(6, 2, 9), MetricTag::kEuclidean);
  CHECK_THROWS_AS(rips_persistence(d, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(rips_persistence(d, 3, 1.0), ValidationError);
  const auto big =
      distance_matrix(random_cloud(250, 2, 9), MetricTag::kEuclidean);
  CHECK_THROWS_AS(rips_persistence(big, 2, big.diameter() + 1.0),
                  ValidationError);
}
