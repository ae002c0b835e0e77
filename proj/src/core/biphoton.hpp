#pragma once

#include <optional>
#include <vector>

#include "core/transfer_kernel.hpp"

namespace ghostphase {

struct PumpProfile {
  enum class Kind { plane_wave, gaussian };
  Kind kind = Kind::plane_wave;
  double waist = 0.0;  // 1/e field radius, gaussian only

  static PumpProfile plane_wave() { return {}; }
  static PumpProfile gaussian(double waist) { return {Kind::gaussian, waist}; }
};

struct SourceSpec {
  Wavelength lambda_pump{406e-9};
  double crystal_length = 1.5e-3;
  PumpProfile pump;
  // Illuminated width for the thin-crystal form; unset means the whole grid.
  std::optional<double> pump_aperture;
};

/// Paraxial degenerate collinear mismatch (q1 - q2)^2 / (2 k_p).
double longitudinal_mismatch(double q1, double q2, double k_pump);

/// sinc(l*delta/(2*pi)) * exp(-i*l*delta/2) with sinc(u) = sin(pi*u)/(pi*u).
cdouble phase_matching(double q1, double q2, const SourceSpec& spec);

/// Two-photon amplitude phi(x, x') on a grid shared by both photons,
/// normalised so that sum |phi|^2 * pitch^2 = 1.
class BiphotonState {
 public:
  enum class Form { diagonal_thin_crystal, full };

  static BiphotonState diagonal(Grid1D grid, std::vector<cdouble> diag);
  static BiphotonState dense(Grid1D grid, CMatrix phi);

  const Grid1D& grid() const noexcept { return grid_; }
  Form form() const noexcept { return form_; }
  bool is_diagonal() const noexcept { return form_ == Form::diagonal_thin_crystal; }

  // Diagonal entries; valid for the diagonal form only.
  const std::vector<cdouble>& diag() const noexcept { return diag_; }
  // Full matrix; valid for the full form only.
  const CMatrix& matrix() const noexcept { return phi_; }

  cdouble phi(std::size_t i, std::size_t j) const;
  double norm() const;  // sum |phi|^2 pitch^2

 private:
  BiphotonState(Grid1D grid, Form form) : grid_(grid), form_(form) {}

  Grid1D grid_;
  Form form_;
  std::vector<cdouble> diag_;
  CMatrix phi_;
};

BiphotonState build_thin_crystal_state(const SourceSpec& spec, const Grid1D& grid);

/// Finite-crystal two-photon state for a gaussian pump centred on the grid. Periodic boundary
/// conditions on the grid; the pump must decay well inside it.
BiphotonState build_full_state(const SourceSpec& spec, const Grid1D& grid);

/// sqrt of the second moment of |phi|^2 in (x - x')/sqrt(2).
double correlation_width(const BiphotonState& state);

}  // namespace ghostphase
