#pragma once

#include <span>
#include <vector>

#include "core/biphoton.hpp"
#include "core/fresnel.hpp"

namespace ghostphase {

enum class Method { fast, direct };

/// Planes and distances of the two-arm set-up. Arm 1: crystal -> d_a ->
/// object -> d_b -> D1. Arm 2: crystal -> d_2 -> D2.
struct ArmGeometry {
  Grid1D crystal;
  Grid1D object;
  Grid1D d1;
  Grid1D d2;
  FresnelSpec to_object;  // d_a
  FresnelSpec to_d1;      // d_b
  FresnelSpec to_d2;      // d_2
};

/// h1 maps the crystal plane onto D1 (object included), h2 the crystal plane onto D2.
struct TwoArmSystem {
  TransferKernel h1;
  TransferKernel h2;
  FresnelSpec arm2;
};

/// Method::direct composes dense kernels; Method::fast evaluates the d_a
/// leg with the chirp-z transform, one D1 sample at a time.
TwoArmSystem build_two_arm_system(const ArmGeometry& geo, const PhaseObject& obj, Method method,
                                  unsigned workers = 0);

struct CoincidenceMap {
  Grid1D grid1;
  Grid1D grid2;
  CMatrix amplitude;  // [n1 x n2]
  RMatrix g2;         // |amplitude|^2
};

/// A = H1 * Phi * H2^T * pitch^2. The fast method applies the d_2 leg with
/// the chirp-z transform per D1 row; direct uses dense products.
CoincidenceMap coincidence_amplitude(const BiphotonState& state, const TwoArmSystem& sys, Method method,
                                     unsigned workers = 0);

struct ScanResult {
  std::vector<double> x2;
  std::vector<double> coincidence;
  std::vector<double> singles_d2;
  std::vector<double> corrected;
};

/// C(x2) = sum over P1 of g2 * pitch1, averaged over the P2 window centred
/// on every scan position. A window narrower than the D2 pitch falls back to
/// linear interpolation of the unaveraged profile.
ScanResult scan_coincidence(const CoincidenceMap& map, const SlitWindow& p1, double p2_width,
                            std::span<const double> x2);

enum class Detector { d1, d2 };

/// S1(x1) = sum_x2 g2 * pitch2, S2(x2) = sum_x1 g2 * pitch1.
std::vector<double> singles_rate(const CoincidenceMap& map, Detector at);

/// corrected = coincidence * envelope / max(envelope).
ScanResult envelope_correct(const ScanResult& scan, std::span<const double> envelope);

/// Fraction of the arm-1 singles accepted by P1.
double collection_fraction(const CoincidenceMap& map, const SlitWindow& p1);

/// Advanced-wave field on the D2 plane for a point source at x1 on D1,
/// computed from dense kernels independently of coincidence_amplitude.
ComplexField klyshko_image(const BiphotonState& state, const TwoArmSystem& sys, double x1,
                           double impulse = 1.0);

/// Object-independent reference-arm singles of a full state, evaluated on
/// `target` (assumes arm 1 is collected completely).
std::vector<double> reference_singles(const BiphotonState& state, const FresnelSpec& arm2, const Grid1D& target,
                                      unsigned workers = 0);

/// Total sum g2 * pitch1 * pitch2.
double total_coincidence(const CoincidenceMap& map);

}  // namespace ghostphase
