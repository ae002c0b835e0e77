#pragma once

#include <optional>
#include <vector>

#include "core/field.hpp"

namespace ghostphase {

/// Row of electrostatically pulled micro-mirrors. Column j pulled down by
/// pull_depth[j] adds a round-trip phase 4*pi*pull_depth[j]/lambda.
struct MirrorArraySpec {
  int n_columns = 12;
  double column_width = 300e-6;
  std::vector<double> pull_depth;  // one entry per column; empty means all zero
  Wavelength lambda{812e-9};
  // Reflective span, centred on the lattice. Defaults to n_columns * column_width
  // and may be narrower (clipping the outer columns), never wider.
  std::optional<double> aperture_width;

  double lattice_width() const noexcept { return n_columns * column_width; }
  double reflective_width() const noexcept { return aperture_width.value_or(lattice_width()); }
  double column_phase(int j) const;
};

/// Pure phase reflector r_i = aperture_i * exp(i*theta_i). Phases are stored
/// unwrapped.
struct PhaseObject {
  Grid1D grid;
  std::vector<double> theta;
  std::vector<bool> aperture;

  cdouble reflectance(std::size_t i) const;
};

struct SlitWindow {
  double center = 0.0;
  double width = 1.4e-3;
};

PhaseObject build_phase_object(const MirrorArraySpec& spec, const Grid1D& grid);

/// Fully reflective object with the given per-sample phase.
PhaseObject make_phase_object(const Grid1D& grid, std::vector<double> theta, std::vector<bool> aperture);

ComplexField apply_object(const ComplexField& f, const PhaseObject& obj);

/// mask_i = |x_i - center| <= width/2. Throws when no sample is selected.
std::vector<bool> window_mask(const Grid1D& grid, const SlitWindow& w);

}  // namespace ghostphase
