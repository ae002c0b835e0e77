#pragma once

#include <complex>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace ghostphase {

using cdouble = std::complex<double>;

/// Transverse complex amplitude sampled on a grid. The grid travels with the
/// samples so plane mismatches surface as errors.
class ComplexField {
 public:
  explicit ComplexField(Grid1D grid);
  ComplexField(Grid1D grid, std::vector<cdouble> amp);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return amp_.size(); }

  std::span<const cdouble> amp() const noexcept { return amp_; }
  std::span<cdouble> amp() noexcept { return amp_; }

  cdouble operator[](std::size_t i) const noexcept { return amp_[i]; }
  cdouble& operator[](std::size_t i) noexcept { return amp_[i]; }

 private:
  Grid1D grid_;
  std::vector<cdouble> amp_;
};

/// Discrete L2 norm: sum |amp_i|^2 * pitch.
double field_power(const ComplexField& f);

/// Linear interpolation of real and imaginary parts onto target. Target
/// samples outside [first, last] of the source are zero.
ComplexField resample(const ComplexField& f, const Grid1D& target);

/// Peak-relative intensity at the outermost samples: max(|a_0|^2, |a_{n-1}|^2) / max |a|^2.
double edge_intensity_ratio(const ComplexField& f);

}  // namespace ghostphase
