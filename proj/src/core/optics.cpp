#include "core/optics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"

namespace ghostphase {

double MirrorArraySpec::column_phase(int j) const {
  if (pull_depth.empty()) return 0.0;
  return 4.0 * std::numbers::pi * pull_depth.at(static_cast<std::size_t>(j)) / lambda.meters();
}

cdouble PhaseObject::reflectance(std::size_t i) const {
  if (!aperture[i]) return {0.0, 0.0};
  return std::polar(1.0, theta[i]);
}

PhaseObject build_phase_object(const MirrorArraySpec& spec, const Grid1D& grid) {
  if (spec.n_columns < 1) throw_config("mirror array needs at least one column");
  if (!(spec.column_width > 0.0)) throw_config("mirror column width must be positive");
  if (!spec.pull_depth.empty() && spec.pull_depth.size() != static_cast<std::size_t>(spec.n_columns)) {
    std::ostringstream os;
    os << "mirror array has " << spec.n_columns << " columns but " << spec.pull_depth.size()
       << " pull depths";
    throw_config(os.str());
  }
  for (const double d : spec.pull_depth) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw_config("mirror pull depths must be non-negative");
  }
  const double span = spec.reflective_width();
  if (!(span > 0.0)) throw_config("mirror aperture width must be positive");
  if (span > spec.lattice_width() * (1.0 + 1e-12)) {
    throw_config("mirror aperture is wider than the column lattice");
  }
  if (grid.extent() < span * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "object grid extent " << grid.extent() << " m is smaller than the mirror aperture " << span << " m";
    throw_config(os.str());
  }
  if (grid.pitch() > spec.column_width / 8.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "object grid pitch " << grid.pitch() << " m does not resolve " << spec.column_width
       << " m columns (needs <= column_width/8)";
    throw_config(os.str());
  }

  const std::size_t n = grid.size();
  std::vector<double> theta(n, 0.0);
  std::vector<bool> aperture(n, false);
  const double tol = 1e-9 * grid.pitch();
  const double half_lattice = 0.5 * spec.lattice_width();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.coordinate(i) - grid.center();
    if (std::abs(x) > 0.5 * span + tol) continue;
    aperture[i] = true;
    auto j = static_cast<int>(std::floor((x + half_lattice + tol) / spec.column_width));
    if (j < 0) j = 0;
    if (j >= spec.n_columns) j = spec.n_columns - 1;
    theta[i] = spec.column_phase(j);
  }
  return PhaseObject{grid, std::move(theta), std::move(aperture)};
}

PhaseObject make_phase_object(const Grid1D& grid, std::vector<double> theta, std::vector<bool> aperture) {
  if (theta.size() != grid.size() || aperture.size() != grid.size()) {
    throw_config("phase object arrays must match the grid size");
  }
  return PhaseObject{grid, std::move(theta), std::move(aperture)};
}

ComplexField apply_object(const ComplexField& f, const PhaseObject& obj) {
  if (!(f.grid() == obj.grid)) throw_config("apply_object: field and object live on different grids");
  ComplexField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= obj.reflectance(i);
  return out;
}

std::vector<bool> window_mask(const Grid1D& grid, const SlitWindow& w) {
  if (!(w.width > 0.0)) throw_config("slit window width must be positive");
  std::vector<bool> mask(grid.size(), false);
  const double half = 0.5 * w.width + 1e-9 * grid.pitch();
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.coordinate(i) - w.center) <= half) {
      mask[i] = true;
      any = true;
    }
  }
  if (!any) {
    std::ostringstream os;
    os << "slit window at " << w.center << " m (width " << w.width << " m) selects no grid sample";
    throw_config(os.str());
  }
  return mask;
}

}  // namespace ghostphase
