#pragma once

#include <memory>
#include <span>

#include "core/fft.hpp"
#include "core/transfer_kernel.hpp"

namespace ghostphase {

/// Paraxial free-space propagation over `distance`.
struct FresnelSpec {
  double distance = 1.0;
  Wavelength lambda{812e-9};
  // Keep the exp(i*k*d) carrier. It cancels in every |.|^2 output.
  bool carrier_phase = true;

  /// exp(i*k*d) / sqrt(i*lambda*d), with sqrt(i) = exp(i*pi/4).
  cdouble prefactor() const;
};

/// Throws a numerical-precondition error unless the planes sample the
/// kernel chirp without folding: pitch_in * extent_out <= lambda*d and
/// pitch_out * extent_in <= lambda*d.
void check_fresnel_sampling(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out);

/// h[m,i] = prefactor * exp(i*k*(x_m - x_i)^2 / (2d)).
TransferKernel fresnel_kernel(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out,
                              unsigned workers = 0);

/// The grid a single DFT lands on: same sample count, pitch lambda*d/(n*pitch_in).
Grid1D fresnel_native_grid(const FresnelSpec& spec, const Grid1D& grid_in);

/// Fast application of the Fresnel operator between two fixed planes.
///
/// The quadrature sum is factored as chirp * DFT * chirp; the DFT with an
/// arbitrary output pitch is evaluated as a chirp-z (Bluestein) convolution,
/// so the result equals the direct midpoint quadrature on grid_out up to
/// round-off. Construction precomputes the chirps and the transformed
/// convolution kernel; apply() is const and safe to call concurrently.
class FresnelTransform {
 public:
  FresnelTransform(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out);

  const Grid1D& grid_in() const noexcept { return grid_in_; }
  const Grid1D& grid_out() const noexcept { return grid_out_; }

  ComplexField apply(const ComplexField& f) const;
  /// in.size() == grid_in.size(), out.size() == grid_out.size().
  void apply(std::span<const cdouble> in, std::span<cdouble> out) const;

 private:
  Grid1D grid_in_;
  Grid1D grid_out_;
  std::size_t conv_size_;
  std::vector<cdouble> pre_;
  std::vector<cdouble> post_;
  std::vector<cdouble> chirp_spectrum_;
  std::shared_ptr<const fft::Plan1D> forward_;
  std::shared_ptr<const fft::Plan1D> backward_;
};

/// Single-transform fast path onto fresnel_native_grid(spec, f.grid()).
ComplexField apply_fresnel_fast(const FresnelSpec& spec, const ComplexField& f);
/// Fast path evaluated on an explicit output plane.
ComplexField apply_fresnel_fast(const FresnelSpec& spec, const ComplexField& f, const Grid1D& target);

}  // namespace ghostphase
