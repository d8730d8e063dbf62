#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sonartda {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Raised when an input violates a documented precondition.  The CLI reports
// these as exit code 2 when they occur while checking a configuration and as
// exit code 3 when raised from inside a running stage.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a computation cannot proceed on otherwise valid inputs
// (exit code 3 in the CLI).
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;

enum class DomainKind { kCircle, kSphereGrid, kInterval };

// Discretized acquisition domain: a periodic circle of look angles, an
// azimuth x elevation grid on the sphere, or a non-periodic unit interval.
// Angles are degrees everywhere outside trigonometric kernels.
class DomainDescriptor {
 public:
  static DomainDescriptor circle(int n_samples);
  static DomainDescriptor sphere_grid(int n_azimuth, int n_elevation);
  static DomainDescriptor interval(int n_samples);

  DomainKind kind() const { return kind_; }
  // Sample count along the first axis (the only axis for circle/interval).
  int count0() const { return n0_; }
  // Elevation sample count; 1 for one-dimensional domains.
  int count1() const { return n1_; }
  int grid_size() const { return n0_ * n1_; }
  // Intrinsic dimension of the domain manifold.
  int dimension() const { return kind_ == DomainKind::kSphereGrid ? 2 : 1; }
  bool periodic0() const { return kind_ != DomainKind::kInterval; }

  // Row-major index of a sphere-grid node (azimuth major, elevation minor).
  int index_of(int i_az, int i_el) const { return i_az * n1_ + i_el; }

  bool operator==(const DomainDescriptor&) const = default;

 private:
  DomainDescriptor(DomainKind kind, int n0, int n1)
      : kind_(kind), n0_(n0), n1_(n1) {}

  DomainKind kind_;
  int n0_;
  int n1_;
};

// Sampled echo data over a discretized domain.  Samples are stored dense,
// grid-major / channel-minor; a map is flagged real when every imaginary
// part is exactly zero.
class SignalMap {
 public:
  SignalMap(DomainDescriptor domain, int channels,
            std::vector<Complex> samples);

  const DomainDescriptor& domain() const { return domain_; }
  int channels() const { return channels_; }
  int grid_size() const { return domain_.grid_size(); }
  bool is_real() const { return is_real_; }

  Complex at(int grid_index, int channel) const {
    return samples_[static_cast<std::size_t>(grid_index) * channels_ + channel];
  }
  std::span<const Complex> row(int grid_index) const {
    return {samples_.data() + static_cast<std::size_t>(grid_index) * channels_,
            static_cast<std::size_t>(channels_)};
  }
  const std::vector<Complex>& samples() const { return samples_; }

  bool operator==(const SignalMap&) const = default;

 private:
  DomainDescriptor domain_;
  int channels_;
  std::vector<Complex> samples_;
  bool is_real_;
};

// A finite set of points in R^n, optionally tagged with the domain
// parameter (angle, or azimuth/elevation pair) each point was sampled at.
class PointCloud {
 public:
  PointCloud(int ambient_dim, std::vector<double> coords);
  PointCloud(int ambient_dim, std::vector<double> coords,
             std::vector<std::array<double, 2>> labels, int label_dim);

  int ambient_dim() const { return ambient_dim_; }
  int size() const {
    return ambient_dim_ == 0 ? 0
                             : static_cast<int>(coords_.size()) / ambient_dim_;
  }
  std::span<const double> point(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * ambient_dim_,
            static_cast<std::size_t>(ambient_dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }

  bool has_labels() const { return label_dim_ > 0; }
  int label_dim() const { return label_dim_; }
  const std::vector<std::array<double, 2>>& labels() const { return labels_; }

 private:
  void validate() const;

  int ambient_dim_;
  std::vector<double> coords_;                 // size() * ambient_dim_
  std::vector<std::array<double, 2>> labels_;  // [1] unused when label_dim==1
  int label_dim_ = 0;
};

}  // namespace sonartda
