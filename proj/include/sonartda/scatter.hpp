#pragma once

#include <vector>

#include "sonartda/types.hpp"

namespace sonartda {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline double norm(const Vec3& v) {
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

// An ideal point reflector: position in meters, dimensionless complex
// reflectivity.
struct Scatterer {
  Vec3 position;
  Complex reflectivity;
};

// Default free-space normalization of the spherical spreading kernel.
constexpr double kFreeSpaceGreenScale = 1.0 / (4.0 * kPi);

// A set of point scatterers plus the normalization constant applied to the
// spreading kernel.
class Scene {
 public:
  explicit Scene(std::vector<Scatterer> scatterers,
                 double green_normalization = kFreeSpaceGreenScale);

  const std::vector<Scatterer>& scatterers() const { return scatterers_; }
  double green_normalization() const { return green_norm_; }

  // Same scene shifted rigidly in world coordinates (models a target that
  // is not perfectly centered on the collection axis).
  Scene translated(const Vec3& offset) const;

 private:
  std::vector<Scatterer> scatterers_;
  double green_norm_;
};

// Sensor trajectory and transmit parameters: where the platform orbits and
// which wavenumbers it collects.
class CollectionGeometry {
 public:
  CollectionGeometry(DomainDescriptor trajectory, double radius_m,
                     std::vector<double> wavenumbers);

  const DomainDescriptor& trajectory() const { return trajectory_; }
  double radius() const { return radius_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

 private:
  DomainDescriptor trajectory_;
  double radius_;
  std::vector<double> wavenumbers_;  // strictly increasing, all positive
};

// Outgoing spherical wave kernel scale * exp(-i k r) / r.
// Throws if the evaluation point touches the source (r <= 0).
Complex green(double k, double r, double scale = 1.0);

// Received sample vector at one sensor position: per wavenumber, the
// reflectivity-weighted sum of spreading kernels over all scatterers.
std::vector<Complex> point_scatter_response(const Scene& scene,
                                            const Vec3& sensor_position,
                                            const std::vector<double>& wavenumbers);

// Circular (CSAS) collection: the sensor orbits in the z=0 plane, one grid
// angle per row, one channel per wavenumber.  The parallel version and the
// serial reference produce bit-identical maps.
SignalMap csas_collect(const Scene& scene, const CollectionGeometry& geometry);
SignalMap csas_collect_serial(const Scene& scene,
                              const CollectionGeometry& geometry);

// Full azimuth/elevation orbit at a single wavenumber; the output is the
// received signal strength |u|, one real channel.
SignalMap sphere_collect(const Scene& scene, const CollectionGeometry& geometry);
SignalMap sphere_collect_serial(const Scene& scene,
                                const CollectionGeometry& geometry);

// Point-scatterer stand-in for a short pipe segment: scatterers of equal
// reflectivity uniformly spaced along the two long sides of an axis-aligned
// rectangle (length along x) centered at the origin in the z=0 plane.
Scene pipe_scene(double length_m, double width_m, int scatterers_per_side,
                 Complex reflectivity);

// Additive white Gaussian noise, standard deviation sigma per real
// component of every sample.  Deterministic in (map, sigma, seed); sigma=0
// returns the input unchanged.
SignalMap add_awgn(const SignalMap& map, double sigma, std::uint64_t seed);

// 10 log10(peak / (sigma sqrt(n_range_cells))).
double snr_db(double peak_cross_section, double sigma, int n_range_cells);

}  // namespace sonartda
