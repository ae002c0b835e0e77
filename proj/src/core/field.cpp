#include "core/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace ghostphase {

ComplexField::ComplexField(Grid1D grid) : grid_(grid), amp_(grid.size()) {}

ComplexField::ComplexField(Grid1D grid, std::vector<cdouble> amp) : grid_(grid), amp_(std::move(amp)) {
  if (amp_.size() != grid_.size()) {
    std::ostringstream os;
    os << "field has " << amp_.size() << " samples but its grid has " << grid_.size();
    throw_config(os.str());
  }
}

double field_power(const ComplexField& f) {
  double sum = 0.0;
  for (const cdouble a : f.amp()) sum += std::norm(a);
  return sum * f.grid().pitch();
}

ComplexField resample(const ComplexField& f, const Grid1D& target) {
  const Grid1D& src = f.grid();
  if (target == src) return f;

  const double tol = 1e-9 * src.pitch();
  const double lo = src.first() - tol;
  const double hi = src.last() + tol;
  if (target.last() < lo || target.first() > hi) {
    throw_config("resample: target grid does not overlap the source grid");
  }

  ComplexField out(target);
  const std::size_t n = src.size();
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double x = target.coordinate(j);
    if (x < lo || x > hi) continue;
    const double t = std::clamp((x - src.first()) / src.pitch(), 0.0, static_cast<double>(n - 1));
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i >= n - 1) i = n - 2;
    const double w = t - static_cast<double>(i);
    const cdouble a = f[i];
    const cdouble b = f[i + 1];
    out[j] = cdouble((1.0 - w) * a.real() + w * b.real(), (1.0 - w) * a.imag() + w * b.imag());
  }
  return out;
}

double edge_intensity_ratio(const ComplexField& f) {
  double peak = 0.0;
  for (const cdouble a : f.amp()) peak = std::max(peak, std::norm(a));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(std::norm(f[0]), std::norm(f[f.size() - 1]));
  return edge / peak;
}

}  // namespace ghostphase
