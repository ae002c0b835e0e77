#include "core/grid.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace ghostphase {

Grid1D::Grid1D(std::size_t n, double pitch, double center) : n_(n), pitch_(pitch), center_(center) {
  if (n < 2) {
    std::ostringstream os;
    os << "grid needs at least 2 samples, got " << n;
    throw_config(os.str());
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    std::ostringstream os;
    os << "grid pitch must be positive and finite, got " << pitch;
    throw_config(os.str());
  }
  if (!std::isfinite(center)) throw_config("grid center must be finite");
}

std::size_t Grid1D::nearest_index(double x) const noexcept {
  const double t = (x - center_) / pitch_ + 0.5 * static_cast<double>(n_ - 1);
  if (!(t > 0.0)) return 0;
  const auto i = static_cast<std::size_t>(std::llround(t));
  return i >= n_ ? n_ - 1 : i;
}

Grid1D make_grid(std::size_t n, double pitch, double center) { return Grid1D(n, pitch, center); }

Wavelength::Wavelength(double meters) : lambda_(meters), k_(2.0 * std::numbers::pi / meters) {
  if (!(meters > 0.0) || !std::isfinite(meters)) {
    std::ostringstream os;
    os << "wavelength must be positive, got " << meters;
    throw_config(os.str());
  }
}

}  // namespace ghostphase
