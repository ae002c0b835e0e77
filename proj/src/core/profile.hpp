#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ghostphase {

struct ProfileMetrics {
  double peak = 0.0;
  double peak_position = 0.0;
  double center_value = 0.0;  // value at the sample closest to the centre
  double visibility = 0.0;    // (peak - center) / (peak + center)
  double dip_width = 0.0;     // full width at half depth; 0 without a central dip
  bool central_minimum = false;
};

/// Shape metrics of a sampled profile y(x), x ascending.
ProfileMetrics profile_metrics(std::span<const double> x, std::span<const double> y, double center = 0.0);

/// Interior local maxima; a plateau counts once, at its first sample.
std::vector<std::size_t> local_maxima(std::span<const double> y);

/// Local maxima reaching at least `fraction` of the global peak.
std::vector<std::size_t> dominant_maxima(std::span<const double> y, double fraction = 0.5);

}  // namespace ghostphase
