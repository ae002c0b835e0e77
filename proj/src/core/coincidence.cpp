#include "core/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace ghostphase {
namespace {

void require_same(const Grid1D& a, const Grid1D& b, const char* what) {
  if (!(a == b)) throw_config(std::string(what));
}

// Linear interpolation of y (sampled on g) at x; x must lie within the grid.
double interpolate(const Grid1D& g, std::span<const double> y, double x) {
  const double t = (x - g.first()) / g.pitch();
  const double last = static_cast<double>(g.size() - 1);
  if (t <= 0.0) return y.front();
  if (t >= last) return y.back();
  const auto i = static_cast<std::size_t>(std::floor(t));
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * y[i] + f * y[i + 1];
}

// Mean of y over samples with |x_i - c| <= width/2, or interpolation when none.
double window_average(const Grid1D& g, std::span<const double> y, double c, double width) {
  const double half = 0.5 * width + 1e-9 * g.pitch();
  const double lo = (c - half - g.first()) / g.pitch();
  const double hi = (c + half - g.first()) / g.pitch();
  const auto i0 = static_cast<long long>(std::ceil(lo));
  const auto i1 = static_cast<long long>(std::floor(hi));
  const auto first = std::max<long long>(i0, 0);
  const auto last = std::min<long long>(i1, static_cast<long long>(g.size()) - 1);
  if (last < first) return interpolate(g, y, c);
  double sum = 0.0;
  for (long long i = first; i <= last; ++i) sum += y[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(last - first + 1);
}

}  // namespace

TwoArmSystem build_two_arm_system(const ArmGeometry& geo, const PhaseObject& obj, Method method,
                                  unsigned workers) {
  require_same(obj.grid, geo.object, "phase object grid differs from the object plane");
  TransferKernel h2 = fresnel_kernel(geo.to_d2, geo.crystal, geo.d2, workers);

  if (method == Method::direct) {
    const TransferKernel fa = fresnel_kernel(geo.to_object, geo.crystal, geo.object, workers);
    const TransferKernel fb = fresnel_kernel(geo.to_d1, geo.object, geo.d1, workers);
    TransferKernel h1 = compose(fb, compose(object_kernel(obj), fa, workers), workers);
    return TwoArmSystem{std::move(h1), std::move(h2), geo.to_d2};
  }

  // Row m of h1 is the object-plane point-source wave of D1 sample m, masked by
  // the object and carried back over d_a (the kernel is symmetric in its planes).
  const TransferKernel fb = fresnel_kernel(geo.to_d1, geo.object, geo.d1, workers);
  const FresnelTransform to_crystal(geo.to_object, geo.object, geo.crystal);
  const std::size_t n1 = geo.d1.size();
  const std::size_t no = geo.object.size();
  const std::size_t nc = geo.crystal.size();
  CMatrix h1(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(nc));
  parallel_for(n1, workers, [&](std::size_t m) {
    std::vector<cdouble> u(no);
    std::vector<cdouble> out(nc);
    for (std::size_t o = 0; o < no; ++o) {
      u[o] = fb.matrix()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(o)) * obj.reflectance(o);
    }
    to_crystal.apply(u, out);
    for (std::size_t c = 0; c < nc; ++c) h1(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = out[c];
  });
  return TwoArmSystem{TransferKernel(geo.crystal, geo.d1, std::move(h1)), std::move(h2), geo.to_d2};
}

CoincidenceMap coincidence_amplitude(const BiphotonState& state, const TwoArmSystem& sys, Method method,
                                     unsigned workers) {
  const Grid1D& src = state.grid();
  require_same(sys.h1.grid_in(), src, "arm-1 kernel does not start on the source grid");
  require_same(sys.h2.grid_in(), src, "arm-2 kernel does not start on the source grid");
  const Grid1D& g1 = sys.h1.grid_out();
  const Grid1D& g2 = sys.h2.grid_out();
  const auto n1 = static_cast<Eigen::Index>(g1.size());
  const auto n2 = static_cast<Eigen::Index>(g2.size());
  const auto ns = static_cast<Eigen::Index>(src.size());
  const double p = src.pitch();

  // B = H1 * Phi * pitch: the arm-1 amplitude "reflected" by the source.
  CMatrix b;
  if (state.is_diagonal()) {
    b = sys.h1.matrix();
    for (Eigen::Index c = 0; c < ns; ++c) b.col(c) *= state.diag()[static_cast<std::size_t>(c)] * p;
  } else {
    b = blocked_product(sys.h1.matrix(), state.matrix(), workers);
    b *= p;
  }

  CMatrix a;
  if (method == Method::direct) {
    a = blocked_product(b, sys.h2.matrix().transpose(), workers);
    a *= p;
  } else {
    const FresnelTransform to_d2(sys.arm2, src, g2);
    a.resize(n1, n2);
    parallel_for(static_cast<std::size_t>(n1), workers, [&](std::size_t m) {
      const auto row = static_cast<Eigen::Index>(m);
      std::vector<cdouble> in(b.row(row).begin(), b.row(row).end());
      std::vector<cdouble> out(static_cast<std::size_t>(n2));
      to_d2.apply(in, out);
      for (Eigen::Index j = 0; j < n2; ++j) a(row, j) = out[static_cast<std::size_t>(j)];
    });
  }
  RMatrix g2m = a.cwiseAbs2();
  return CoincidenceMap{g1, g2, std::move(a), std::move(g2m)};
}

ScanResult scan_coincidence(const CoincidenceMap& map, const SlitWindow& p1, double p2_width,
                            std::span<const double> x2) {
  if (!(p2_width > 0.0)) throw_config("P2 window width must be positive");
  const std::vector<bool> mask = window_mask(map.grid1, p1);
  const std::size_t n2 = map.grid2.size();
  std::vector<double> line(n2, 0.0);
  for (std::size_t m = 0; m < map.grid1.size(); ++m) {
    if (!mask[m]) continue;
    for (std::size_t j = 0; j < n2; ++j) line[j] += map.g2(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
  }
  for (double& v : line) v *= map.grid1.pitch();
  const std::vector<double> s2 = singles_rate(map, Detector::d2);

  const double lo = map.grid2.first() - 0.5 * map.grid2.pitch();
  const double hi = map.grid2.last() + 0.5 * map.grid2.pitch();
  ScanResult out;
  out.x2.assign(x2.begin(), x2.end());
  for (const double x : x2) {
    if (x < lo || x > hi) {
      std::ostringstream os;
      os << "scan position " << x << " m lies outside the D2 grid";
      throw_config(os.str());
    }
    out.coincidence.push_back(window_average(map.grid2, line, x, p2_width));
    out.singles_d2.push_back(window_average(map.grid2, s2, x, p2_width));
  }
  out.corrected = out.coincidence;
  return out;
}

std::vector<double> singles_rate(const CoincidenceMap& map, Detector at) {
  if (at == Detector::d1) {
    std::vector<double> s(map.grid1.size());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = map.g2.row(static_cast<Eigen::Index>(m)).sum() * map.grid2.pitch();
    return s;
  }
  std::vector<double> s(map.grid2.size(), 0.0);
  for (Eigen::Index m = 0; m < map.g2.rows(); ++m) {
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += map.g2(m, static_cast<Eigen::Index>(j));
  }
  for (double& v : s) v *= map.grid1.pitch();
  return s;
}

ScanResult envelope_correct(const ScanResult& scan, std::span<const double> envelope) {
  if (envelope.size() != scan.x2.size()) {
    std::ostringstream os;
    os << "envelope has " << envelope.size() << " values but the scan has " << scan.x2.size() << " points";
    throw_data(os.str());
  }
  double peak = 0.0;
  for (const double e : envelope) {
    if (!std::isfinite(e) || e < 0.0) throw_data("envelope values must be finite and non-negative");
    peak = std::max(peak, e);
  }
  if (peak == 0.0) throw_data("envelope is identically zero");
  ScanResult out = scan;
  for (std::size_t i = 0; i < out.corrected.size(); ++i) out.corrected[i] = scan.coincidence[i] * envelope[i] / peak;
  return out;
}

double collection_fraction(const CoincidenceMap& map, const SlitWindow& p1) {
  const std::vector<bool> mask = window_mask(map.grid1, p1);
  const std::vector<double> s1 = singles_rate(map, Detector::d1);
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t m = 0; m < s1.size(); ++m) {
    total += s1[m];
    if (mask[m]) inside += s1[m];
  }
  return total > 0.0 ? inside / total : 0.0;
}

ComplexField klyshko_image(const BiphotonState& state, const TwoArmSystem& sys, double x1, double impulse) {
  if (!state.is_diagonal()) throw_config("the advanced-wave picture here needs a thin-crystal state");
  require_same(sys.h1.grid_in(), state.grid(), "arm-1 kernel does not start on the source grid");
  require_same(sys.h2.grid_in(), state.grid(), "arm-2 kernel does not start on the source grid");
  const Grid1D& g1 = sys.h1.grid_out();
  const std::size_t m = g1.nearest_index(x1);
  if (std::abs(g1.coordinate(m) - x1) > 1e-6 * g1.pitch()) {
    std::ostringstream os;
    os << "x1 = " << x1 << " m is not a D1 grid sample";
    throw_config(os.str());
  }
  ComplexField point(g1);
  point[m] = impulse / g1.pitch();
  ComplexField at_crystal = apply_kernel(transpose(sys.h1), point);
  const double p = state.grid().pitch();
  for (std::size_t c = 0; c < at_crystal.size(); ++c) at_crystal[c] *= state.diag()[c] * p;
  return apply_kernel(sys.h2, at_crystal);
}

std::vector<double> reference_singles(const BiphotonState& state, const FresnelSpec& arm2, const Grid1D& target,
                                      unsigned workers) {
  const Grid1D& g = state.grid();
  const std::size_t n = g.size();
  const FresnelTransform to_d2(arm2, g, target);
  // Row x of phi propagated over the reference arm; rows are summed
  // incoherently in fixed order afterwards.
  RMatrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(target.size()));
  parallel_for(n, workers, [&](std::size_t i) {
    std::vector<cdouble> in(n);
    std::vector<cdouble> out(target.size());
    for (std::size_t j = 0; j < n; ++j) in[j] = state.phi(i, j);
    to_d2.apply(in, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = std::norm(out[k]);
    }
  });
  std::vector<double> s(target.size(), 0.0);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += rows(i, static_cast<Eigen::Index>(k));
  }
  for (double& v : s) v *= g.pitch();
  return s;
}

double total_coincidence(const CoincidenceMap& map) {
  return map.g2.sum() * map.grid1.pitch() * map.grid2.pitch();
}

}  // namespace ghostphase
