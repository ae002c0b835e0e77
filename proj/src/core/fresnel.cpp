#include "core/fresnel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/log.hpp"
#include "core/parallel.hpp"

namespace ghostphase {
namespace {

void validate(const FresnelSpec& spec) {
  if (!(spec.distance > 0.0) || !std::isfinite(spec.distance)) {
    std::ostringstream os;
    os << "propagation distance must be positive, got " << spec.distance;
    throw_config(os.str());
  }
}

// exp(i*phase) with the phase reduced modulo 2*pi first.
cdouble unit(double phase) {
  const double r = std::remainder(phase, 2.0 * std::numbers::pi);
  return {std::cos(r), std::sin(r)};
}

}  // namespace

cdouble FresnelSpec::prefactor() const {
  const double ld = lambda.meters() * distance;
  const cdouble inv_sqrt_i = std::polar(1.0, -0.25 * std::numbers::pi);
  cdouble c = inv_sqrt_i / std::sqrt(ld);
  if (carrier_phase) c *= unit(lambda.wavenumber() * distance);
  return c;
}

void check_fresnel_sampling(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out) {
  validate(spec);
  const double ld = spec.lambda.meters() * spec.distance;
  const double slack = 1.0 + 1e-9;
  if (grid_in.pitch() * grid_out.extent() > ld * slack) {
    std::ostringstream os;
    os << "input pitch " << grid_in.pitch() << " m aliases the Fresnel chirp over d=" << spec.distance
       << " m: needs pitch_in <= lambda*d/extent_out = " << ld / grid_out.extent() << " m";
    throw_numerical(os.str());
  }
  if (grid_out.pitch() * grid_in.extent() > ld * slack) {
    std::ostringstream os;
    os << "output pitch " << grid_out.pitch() << " m aliases the Fresnel chirp over d=" << spec.distance
       << " m: needs pitch_out <= lambda*d/extent_in = " << ld / grid_in.extent() << " m";
    throw_numerical(os.str());
  }
}

TransferKernel fresnel_kernel(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out,
                              unsigned workers) {
  check_fresnel_sampling(spec, grid_in, grid_out);
  const double kappa = spec.lambda.wavenumber() / (2.0 * spec.distance);
  const cdouble c = spec.prefactor();
  CMatrix h(static_cast<Eigen::Index>(grid_out.size()), static_cast<Eigen::Index>(grid_in.size()));
  parallel_for(grid_out.size(), workers, [&](std::size_t m) {
    const double y = grid_out.coordinate(m);
    for (std::size_t i = 0; i < grid_in.size(); ++i) {
      const double dx = y - grid_in.coordinate(i);
      h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) = c * unit(kappa * dx * dx);
    }
  });
  return TransferKernel(grid_in, grid_out, std::move(h));
}

Grid1D fresnel_native_grid(const FresnelSpec& spec, const Grid1D& grid_in) {
  validate(spec);
  const double n = static_cast<double>(grid_in.size());
  return Grid1D(grid_in.size(), spec.lambda.meters() * spec.distance / (n * grid_in.pitch()), grid_in.center());
}

// With x_i = a + i*p and y_m = b + m*q the exponent k/(2d)*(y_m - x_i)^2 splits into
//   [kappa*x_i^2 - 2*kappa*b*p*i - kappa*p*q*i^2]          (input chirp)
// + [kappa*p*q*(m - i)^2]                                   (convolution chirp)
// + [kappa*y_m^2 - 2*kappa*a*b - 2*kappa*a*q*m - kappa*p*q*m^2]  (output chirp)
FresnelTransform::FresnelTransform(const FresnelSpec& spec, const Grid1D& grid_in, const Grid1D& grid_out)
    : grid_in_(grid_in), grid_out_(grid_out) {
  check_fresnel_sampling(spec, grid_in, grid_out);
  const std::size_t n = grid_in.size();
  const std::size_t m = grid_out.size();
  const double kappa = spec.lambda.wavenumber() / (2.0 * spec.distance);
  const double a = grid_in.first();
  const double b = grid_out.first();
  const double p = grid_in.pitch();
  const double q = grid_out.pitch();
  const double kpq = kappa * p * q;

  pre_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    const double x = grid_in.coordinate(i);
    pre_[i] = unit(kappa * x * x - 2.0 * kappa * b * p * di - kpq * di * di);
  }
  const cdouble c = spec.prefactor() * p;
  post_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double dj = static_cast<double>(j);
    const double y = grid_out.coordinate(j);
    post_[j] = c * unit(kappa * y * y - 2.0 * kappa * a * b - 2.0 * kappa * a * q * dj - kpq * dj * dj);
  }

  conv_size_ = fft::fast_size(n + m - 1);
  forward_ = fft::plan_1d(conv_size_, fft::Direction::forward);
  backward_ = fft::plan_1d(conv_size_, fft::Direction::backward);

  std::vector<cdouble> chirp(conv_size_, cdouble{});
  for (std::size_t j = 0; j < m; ++j) {
    const double dj = static_cast<double>(j);
    chirp[j] = unit(kpq * dj * dj);
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double dj = static_cast<double>(j);
    chirp[conv_size_ - j] = unit(kpq * dj * dj);
  }
  chirp_spectrum_.resize(conv_size_);
  forward_->execute(chirp.data(), chirp_spectrum_.data());
  const double scale = 1.0 / static_cast<double>(conv_size_);
  for (auto& v : chirp_spectrum_) v *= scale;
}

void FresnelTransform::apply(std::span<const cdouble> in, std::span<cdouble> out) const {
  if (in.size() != grid_in_.size() || out.size() != grid_out_.size()) {
    throw_config("FresnelTransform::apply: buffer sizes do not match the planes");
  }
  std::vector<cdouble> buf(conv_size_, cdouble{});
  std::vector<cdouble> spec(conv_size_);
  for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i] * pre_[i];
  forward_->execute(buf.data(), spec.data());
  for (std::size_t k = 0; k < conv_size_; ++k) spec[k] *= chirp_spectrum_[k];
  backward_->execute(spec.data(), buf.data());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = buf[j] * post_[j];
}

ComplexField FresnelTransform::apply(const ComplexField& f) const {
  if (!(f.grid() == grid_in_)) throw_config("FresnelTransform::apply: field grid differs from the input plane");
  ComplexField out(grid_out_);
  apply(f.amp(), out.amp());
  return out;
}

namespace {

void warn_on_edge_leak(const ComplexField& f) {
  const double ratio = edge_intensity_ratio(f);
  if (ratio > 1e-6) {
    std::ostringstream os;
    os << "field intensity at the grid edge is " << ratio << " of peak; free-space output may be clipped";
    warn(os.str());
  }
}

}  // namespace

ComplexField apply_fresnel_fast(const FresnelSpec& spec, const ComplexField& f) {
  warn_on_edge_leak(f);
  return FresnelTransform(spec, f.grid(), fresnel_native_grid(spec, f.grid())).apply(f);
}

ComplexField apply_fresnel_fast(const FresnelSpec& spec, const ComplexField& f, const Grid1D& target) {
  warn_on_edge_leak(f);
  return FresnelTransform(spec, f.grid(), target).apply(f);
}

}  // namespace ghostphase
