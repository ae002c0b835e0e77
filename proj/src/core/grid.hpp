#pragma once

#include <cstddef>
#include <numbers>

namespace ghostphase {

/// Uniform 1-D sample lattice. Sample i sits at
/// center + (i - (n-1)/2) * pitch, so the lattice is symmetric about center.
class Grid1D {
 public:
  /// Throws a configuration error unless n >= 2 and pitch > 0.
  Grid1D(std::size_t n, double pitch, double center = 0.0);

  std::size_t size() const noexcept { return n_; }
  double pitch() const noexcept { return pitch_; }
  double center() const noexcept { return center_; }
  /// n * pitch: the width of the n cells centred on the samples.
  double extent() const noexcept { return static_cast<double>(n_) * pitch_; }

  double coordinate(std::size_t i) const noexcept {
    return center_ + (static_cast<double>(i) - 0.5 * static_cast<double>(n_ - 1)) * pitch_;
  }
  double first() const noexcept { return coordinate(0); }
  double last() const noexcept { return coordinate(n_ - 1); }

  /// Index of the sample closest to x (clamped to the lattice).
  std::size_t nearest_index(double x) const noexcept;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t n_;
  double pitch_;
  double center_;
};

Grid1D make_grid(std::size_t n, double pitch, double center = 0.0);

/// Vacuum wavelength with its wavenumber k = 2*pi/lambda.
class Wavelength {
 public:
  explicit Wavelength(double meters);
  double meters() const noexcept { return lambda_; }
  double wavenumber() const noexcept { return k_; }

  friend bool operator==(const Wavelength&, const Wavelength&) = default;

 private:
  double lambda_;
  double k_;
};

}  // namespace ghostphase
