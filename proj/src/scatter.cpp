#include "sonartda/scatter.hpp"

#include <algorithm>
#include <cmath>

#include "sonartda/rng.hpp"
#include "sonartda/signal_ops.hpp"

namespace sonartda {

Scene::Scene(std::vector<Scatterer> scatterers, double green_normalization)
    : scatterers_(std::move(scatterers)), green_norm_(green_normalization) {
  if (scatterers_.empty())
    throw ValidationError("scene needs at least one scatterer");
  if (!std::isfinite(green_norm_) || green_norm_ == 0.0)
    throw ValidationError("green normalization must be finite and nonzero");
  for (const Scatterer& s : scatterers_) {
    const bool finite = std::isfinite(s.position.x) &&
                        std::isfinite(s.position.y) &&
                        std::isfinite(s.position.z) &&
                        std::isfinite(s.reflectivity.real()) &&
                        std::isfinite(s.reflectivity.imag());
    if (!finite) throw ValidationError("scatterer has non-finite fields");
  }
}

Scene Scene::translated(const Vec3& offset) const {
  std::vector<Scatterer> moved = scatterers_;
  for (Scatterer& s : moved) s.position = s.position + offset;
  return Scene(std::move(moved), green_norm_);
}

CollectionGeometry::CollectionGeometry(DomainDescriptor trajectory,
                                       double radius_m,
                                       std::vector<double> wavenumbers)
    : trajectory_(trajectory),
      radius_(radius_m),
      wavenumbers_(std::move(wavenumbers)) {
  if (!(radius_ > 0.0)) throw ValidationError("collection radius must be > 0");
  if (wavenumbers_.empty())
    throw ValidationError("collection needs at least one wavenumber");
  for (std::size_t q = 0; q < wavenumbers_.size(); ++q) {
    if (!(wavenumbers_[q] > 0.0))
      throw ValidationError("wavenumbers must be positive");
    if (q > 0 && !(wavenumbers_[q] > wavenumbers_[q - 1]))
      throw ValidationError("wavenumbers must be strictly increasing");
  }
}

Complex green(double k, double r, double scale) {
  if (!(k > 0.0)) throw ValidationError("wavenumber must be positive");
  if (!(r > 0.0)) throw ValidationError("sensor coincides with scatterer");
  const double kr = k * r;
  return (scale / r) * Complex(std::cos(kr), -std::sin(kr));
}

std::vector<Complex> point_scatter_response(
    const Scene& scene, const Vec3& sensor_position,
    const std::vector<double>& wavenumbers) {
  std::vector<Complex> out(wavenumbers.size(), Complex(0.0, 0.0));
  const double scale = scene.green_normalization();
  for (std::size_t q = 0; q < wavenumbers.size(); ++q) {
    Complex acc(0.0, 0.0);
    for (const Scatterer& s : scene.scatterers()) {
      const double r = norm(s.position - sensor_position);
      acc += s.reflectivity * green(wavenumbers[q], r, scale);
    }
    out[q] = acc;
  }
  return out;
}

namespace {

Vec3 circle_sensor(double radius, double theta_deg) {
  const double t = deg_to_rad(theta_deg);
  return {radius * std::cos(t), radius * std::sin(t), 0.0};
}

Vec3 sphere_sensor(double radius, double az_deg, double el_deg) {
  const double th = deg_to_rad(az_deg);
  const double ph = deg_to_rad(el_deg);
  return {radius * std::cos(th) * std::cos(ph),
          radius * std::sin(th) * std::cos(ph), radius * std::sin(ph)};
}

template <bool Parallel>
SignalMap csas_collect_impl(const Scene& scene,
                            const CollectionGeometry& geometry) {
  if (geometry.trajectory().kind() != DomainKind::kCircle)
    throw ValidationError("csas collection requires a circle trajectory");
  const int n = geometry.trajectory().count0();
  const int l = static_cast<int>(geometry.wavenumbers().size());
  std::vector<Complex> samples(static_cast<std::size_t>(n) * l);

#pragma omp parallel for schedule(static) if (Parallel)
  for (int i = 0; i < n; ++i) {
    const Vec3 sensor = circle_sensor(geometry.radius(), 360.0 * i / n);
    const auto resp =
        point_scatter_response(scene, sensor, geometry.wavenumbers());
    std::copy(resp.begin(), resp.end(),
              samples.begin() + static_cast<std::size_t>(i) * l);
  }
  return {geometry.trajectory(), l, std::move(samples)};
}

template <bool Parallel>
SignalMap sphere_collect_impl(const Scene& scene,
                              const CollectionGeometry& geometry) {
  if (geometry.trajectory().kind() != DomainKind::kSphereGrid)
    throw ValidationError("sphere collection requires a sphere-grid trajectory");
  if (geometry.wavenumbers().size() != 1)
    throw ValidationError("sphere collection uses a single wavenumber");
  const DomainDescriptor& dom = geometry.trajectory();
  const auto coords = grid_points(dom);
  const int g = dom.grid_size();
  std::vector<Complex> samples(static_cast<std::size_t>(g));

#pragma omp parallel for schedule(static) if (Parallel)
  for (int i = 0; i < g; ++i) {
    const Vec3 sensor =
        sphere_sensor(geometry.radius(), coords[i][0], coords[i][1]);
    const auto resp =
        point_scatter_response(scene, sensor, geometry.wavenumbers());
    samples[i] = Complex(std::abs(resp[0]), 0.0);
  }
  return {dom, 1, std::move(samples)};
}

}  // namespace

SignalMap csas_collect(const Scene& scene, const CollectionGeometry& geometry) {
  return csas_collect_impl<true>(scene, geometry);
}

SignalMap csas_collect_serial(const Scene& scene,
                              const CollectionGeometry& geometry) {
  return csas_collect_impl<false>(scene, geometry);
}

SignalMap sphere_collect(const Scene& scene,
                         const CollectionGeometry& geometry) {
  return sphere_collect_impl<true>(scene, geometry);
}

SignalMap sphere_collect_serial(const Scene& scene,
                                const CollectionGeometry& geometry) {
  return sphere_collect_impl<false>(scene, geometry);
}

Scene pipe_scene(double length_m, double width_m, int scatterers_per_side,
                 Complex reflectivity) {
  if (!(length_m > width_m) || !(width_m > 0.0))
    throw ValidationError("pipe needs length > width > 0");
  if (scatterers_per_side < 2)
    throw ValidationError("pipe needs at least 2 scatterers per side");
  std::vector<Scatterer> sc;
  sc.reserve(2 * static_cast<std::size_t>(scatterers_per_side));
  for (int side = 0; side < 2; ++side) {
    const double y = (side == 0 ? 0.5 : -0.5) * width_m;
    for (int i = 0; i < scatterers_per_side; ++i) {
      const double x =
          -0.5 * length_m + length_m * i / (scatterers_per_side - 1);
      sc.push_back({{x, y, 0.0}, reflectivity});
    }
  }
  return Scene(std::move(sc));
}

SignalMap add_awgn(const SignalMap& map, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  if (sigma == 0.0) return map;
  const CounterRng rng(seed);
  std::vector<Complex> out(map.samples());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double zr = 0.0, zi = 0.0;
    rng.normal_pair(i, zr, zi);
    out[i] += Complex(sigma * zr, sigma * zi);
  }
  return {map.domain(), map.channels(), std::move(out)};
}

double snr_db(double peak_cross_section, double sigma, int n_range_cells) {
  if (!(peak_cross_section > 0.0) || !(sigma > 0.0) || n_range_cells <= 0)
    throw ValidationError("snr_db requires positive arguments");
  return 10.0 *
         std::log10(peak_cross_section / (sigma * std::sqrt(n_range_cells)));
}

}  // namespace sonartda
