#include "core/biphoton.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace ghostphase {
namespace {

double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double a = std::numbers::pi * u;
  return std::sin(a) / a;
}

// Signed FFT frequency index for position a of an n-point transform.
double signed_index(std::size_t a, std::size_t n) {
  return a < (n + 1) / 2 ? static_cast<double>(a) : static_cast<double>(a) - static_cast<double>(n);
}

}  // namespace

double longitudinal_mismatch(double q1, double q2, double k_pump) {
  const double d = q1 - q2;
  return d * d / (2.0 * k_pump);
}

cdouble phase_matching(double q1, double q2, const SourceSpec& spec) {
  const double delta = longitudinal_mismatch(q1, q2, spec.lambda_pump.wavenumber());
  const double l = spec.crystal_length;
  return sinc(l * delta / (2.0 * std::numbers::pi)) * std::polar(1.0, -0.5 * l * delta);
}

BiphotonState BiphotonState::diagonal(Grid1D grid, std::vector<cdouble> diag) {
  if (diag.size() != grid.size()) throw_config("diagonal state length differs from its grid");
  BiphotonState s(grid, Form::diagonal_thin_crystal);
  s.diag_ = std::move(diag);
  return s;
}

BiphotonState BiphotonState::dense(Grid1D grid, CMatrix phi) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (phi.rows() != n || phi.cols() != n) throw_config("state matrix shape differs from its grid");
  BiphotonState s(grid, Form::full);
  s.phi_ = std::move(phi);
  return s;
}

cdouble BiphotonState::phi(std::size_t i, std::size_t j) const {
  if (is_diagonal()) return i == j ? diag_[i] : cdouble{};
  return phi_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double BiphotonState::norm() const {
  double sum = 0.0;
  if (is_diagonal()) {
    for (const cdouble v : diag_) sum += std::norm(v);
  } else {
    sum = phi_.squaredNorm();
  }
  return sum * grid_.pitch() * grid_.pitch();
}

BiphotonState build_thin_crystal_state(const SourceSpec& spec, const Grid1D& grid) {
  const double width = spec.pump_aperture.value_or(grid.extent());
  if (!(width > 0.0)) throw_config("pump aperture must be positive");
  if (width > grid.extent() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "pump aperture " << width << " m exceeds the crystal grid extent " << grid.extent() << " m";
    throw_config(os.str());
  }
  const double half = 0.5 * width + 1e-9 * grid.pitch();
  std::size_t lit = 0;
  std::vector<bool> inside(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    inside[i] = std::abs(grid.coordinate(i) - grid.center()) <= half;
    lit += inside[i] ? 1 : 0;
  }
  if (lit == 0) throw_config("pump aperture selects no crystal sample");
  const double c = 1.0 / (grid.pitch() * std::sqrt(static_cast<double>(lit)));
  std::vector<cdouble> diag(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diag[i] = inside[i] ? c : 0.0;
  return BiphotonState::diagonal(grid, std::move(diag));
}

BiphotonState build_full_state(const SourceSpec& spec, const Grid1D& grid) {
  if (spec.pump.kind != PumpProfile::Kind::gaussian) throw_config("full state needs a gaussian pump");
  const double w = spec.pump.waist;
  if (!(w > 0.0)) throw_config("pump waist must be positive");
  if (!(spec.crystal_length >= 0.0)) throw_config("crystal length must be non-negative");
  if (3.0 * w > 0.5 * grid.extent()) {
    std::ostringstream os;
    os << "state grid extent " << grid.extent() << " m is too small for pump waist " << w
       << " m (needs extent >= 6 waists)";
    throw_config(os.str());
  }
  const std::size_t n = grid.size();
  const double p = grid.pitch();
  const double dq = 2.0 * std::numbers::pi / (static_cast<double>(n) * p);
  const double kp = spec.lambda_pump.wavenumber();

  // The phase l*delta/2 must not jump by more than pi/2 between neighbouring
  // lattice points; the steepest point is |q1 - q2| = 2*q_max.
  const double q_span = 2.0 * std::numbers::pi / p;
  const double step = spec.crystal_length * q_span * dq / (2.0 * kp);
  if (step >= 0.5 * std::numbers::pi) {
    std::ostringstream os;
    os << "state grid samples the phase-matching function too coarsely (phase step " << step
       << " rad per lattice point); enlarge the grid extent";
    throw_config(os.str());
  }

  std::vector<cdouble> pump(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (grid.coordinate(i) - grid.center()) / w;
    pump[i] = std::exp(-x * x);
  }
  std::vector<cdouble> pump_spec(n);
  fft::plan_1d(n, fft::Direction::forward)->execute(pump.data(), pump_spec.data());

  // phi~[a,b] = Ep~[(a+b) mod n] * xi~(q_a, q_b); one inverse 2-D transform
  // then gives the diagonal convolution of the pump with xi.
  CMatrix phi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    const double qa = dq * signed_index(a, n);
    for (std::size_t b = 0; b < n; ++b) {
      const double qb = dq * signed_index(b, n);
      phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          pump_spec[(a + b) % n] * phase_matching(qa, qb, spec);
    }
  }
  fft::transform_2d(phi.data(), n, n, fft::Direction::backward);

  const double norm = phi.squaredNorm() * p * p;
  if (!(norm > 0.0) || !std::isfinite(norm)) throw_numerical("full biphoton state has zero norm");
  phi /= std::sqrt(norm);
  return BiphotonState::dense(grid, std::move(phi));
}

double correlation_width(const BiphotonState& state) {
  const Grid1D& g = state.grid();
  if (state.is_diagonal()) return 0.0;
  double moment = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = std::norm(state.phi(i, j));
      const double u = (g.coordinate(i) - g.coordinate(j)) / std::numbers::sqrt2;
      moment += w * u * u;
      total += w;
    }
  }
  return total > 0.0 ? std::sqrt(moment / total) : 0.0;
}

}  // namespace ghostphase
