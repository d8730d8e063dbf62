#include "sonartda/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace sonartda {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

DomainDescriptor DomainDescriptor::circle(int n_samples) {
  if (n_samples < 2) throw ValidationError("circle domain needs >= 2 samples");
  return {DomainKind::kCircle, n_samples, 1};
}

DomainDescriptor DomainDescriptor::sphere_grid(int n_azimuth, int n_elevation) {
  if (n_azimuth < 2 || n_elevation < 2)
    throw ValidationError("sphere grid needs >= 2 samples per axis");
  return {DomainKind::kSphereGrid, n_azimuth, n_elevation};
}

DomainDescriptor DomainDescriptor::interval(int n_samples) {
  if (n_samples < 2)
    throw ValidationError("interval domain needs >= 2 samples");
  return {DomainKind::kInterval, n_samples, 1};
}

SignalMap::SignalMap(DomainDescriptor domain, int channels,
                     std::vector<Complex> samples)
    : domain_(domain), channels_(channels), samples_(std::move(samples)) {
  require(channels_ >= 1, "signal map needs at least one channel");
  require(samples_.size() == static_cast<std::size_t>(domain_.grid_size()) *
                                 static_cast<std::size_t>(channels_),
          "sample array length must equal grid size x channels");
  is_real_ = true;
  for (const Complex& z : samples_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("signal map contains a non-finite sample");
    if (z.imag() != 0.0) is_real_ = false;
  }
}

PointCloud::PointCloud(int ambient_dim, std::vector<double> coords)
    : ambient_dim_(ambient_dim), coords_(std::move(coords)) {
  validate();
}

PointCloud::PointCloud(int ambient_dim, std::vector<double> coords,
                       std::vector<std::array<double, 2>> labels,
                       int label_dim)
    : ambient_dim_(ambient_dim),
      coords_(std::move(coords)),
      labels_(std::move(labels)),
      label_dim_(label_dim) {
  validate();
}

void PointCloud::validate() const {
  require(ambient_dim_ >= 1, "point cloud ambient dimension must be >= 1");
  require(coords_.size() % static_cast<std::size_t>(ambient_dim_) == 0,
          "coordinate array length must be a multiple of ambient_dim");
  for (double c : coords_)
    if (!std::isfinite(c))
      throw ValidationError("point cloud contains a non-finite coordinate");
  if (label_dim_ != 0) {
    require(label_dim_ == 1 || label_dim_ == 2, "label dimension must be 1 or 2");
    require(labels_.size() == static_cast<std::size_t>(size()),
            "labels must align one-to-one with points");
  }
}

std::vector<std::array<double, 2>> grid_points(const DomainDescriptor& domain) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<std::size_t>(domain.grid_size()));
  switch (domain.kind()) {
    case DomainKind::kCircle: {
      const int n = domain.count0();
      for (int i = 0; i < n; ++i) pts.push_back({360.0 * i / n, 0.0});
      break;
    }
    case DomainKind::kInterval: {
      const int n = domain.count0();
      for (int i = 0; i < n; ++i)
        pts.push_back({static_cast<double>(i) / (n - 1), 0.0});
      break;
    }
    case DomainKind::kSphereGrid: {
      const int na = domain.count0();
      const int ne = domain.count1();
      for (int ia = 0; ia < na; ++ia) {
        const double az = 360.0 * ia / na;
        for (int ie = 0; ie < ne; ++ie) {
          const double el = -90.0 + 180.0 * (ie + 0.5) / ne;
          pts.push_back({az, el});
        }
      }
      break;
    }
  }
  return pts;
}

SignalMap magnitude_channel(const SignalMap& map, ChannelReducer reducer) {
  const int g = map.grid_size();
  const int l = map.channels();
  const int out_channels = reducer == ChannelReducer::kMagnitude ? l : 1;
  std::vector<Complex> out(static_cast<std::size_t>(g) * out_channels);
  for (int i = 0; i < g; ++i) {
    const auto row = map.row(i);
    switch (reducer) {
      case ChannelReducer::kMagnitude:
        for (int q = 0; q < l; ++q)
          out[static_cast<std::size_t>(i) * l + q] = Complex(std::abs(row[q]), 0.0);
        break;
      case ChannelReducer::kMaxMagnitude: {
        double m = 0.0;
        for (int q = 0; q < l; ++q) m = std::max(m, std::abs(row[q]));
        out[i] = Complex(m, 0.0);
        break;
      }
      case ChannelReducer::kL2Magnitude: {
        double s = 0.0;
        for (int q = 0; q < l; ++q) s += std::norm(row[q]);
        out[i] = Complex(std::sqrt(s), 0.0);
        break;
      }
    }
  }
  return {map.domain(), out_channels, std::move(out)};
}

double peak_magnitude(const SignalMap& map) {
  double m = 0.0;
  for (const Complex& z : map.samples()) m = std::max(m, std::abs(z));
  return m;
}

SignalMap scale_map(const SignalMap& map, double factor) {
  if (!std::isfinite(factor)) throw ValidationError("scale factor must be finite");
  std::vector<Complex> out(map.samples());
  for (Complex& z : out) z *= factor;
  return {map.domain(), map.channels(), std::move(out)};
}

}  // namespace sonartda
