#include "core/profile.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace ghostphase {

std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> out;
  const std::size_t n = y.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;  // plateau [i, j]
    // The profile ends never count: the scan may simply stop on a slope.
    if (i > 0 && j + 1 < n && y[i - 1] < y[i] && y[j + 1] < y[i]) out.push_back(i);
    i = j + 1;
  }
  return out;
}

std::vector<std::size_t> dominant_maxima(std::span<const double> y, double fraction) {
  if (y.empty()) return {};
  const double peak = *std::max_element(y.begin(), y.end());
  std::vector<std::size_t> out;
  for (const std::size_t i : local_maxima(y)) {
    if (y[i] >= fraction * peak) out.push_back(i);
  }
  return out;
}

ProfileMetrics profile_metrics(std::span<const double> x, std::span<const double> y, double center) {
  if (x.size() != y.size() || x.size() < 3) throw_data("profile needs matching x and y with at least 3 points");
  ProfileMetrics m;
  const auto peak_it = std::max_element(y.begin(), y.end());
  m.peak = *peak_it;
  m.peak_position = x[static_cast<std::size_t>(peak_it - y.begin())];

  std::size_t c = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i] - center) < std::abs(x[c] - center)) c = i;
  }
  m.center_value = y[c];
  m.visibility = m.peak + m.center_value > 0.0 ? (m.peak - m.center_value) / (m.peak + m.center_value) : 0.0;
  m.central_minimum = c > 0 && c + 1 < y.size() && y[c] < y[c - 1] && y[c] < y[c + 1];
  if (!m.central_minimum) return m;

  // Walk outwards until the profile climbs above the half-depth level.
  const double level = 0.5 * (m.peak + m.center_value);
  auto crossing = [&](int dir) -> double {
    std::size_t i = c;
    while (true) {
      const std::size_t next = dir > 0 ? i + 1 : i - 1;
      if ((dir > 0 && next >= y.size()) || (dir < 0 && i == 0)) return x[i];
      if (y[next] >= level) {
        const double t = (level - y[i]) / (y[next] - y[i]);
        return x[i] + t * (x[next] - x[i]);
      }
      i = next;
    }
  };
  m.dip_width = crossing(+1) - crossing(-1);
  return m;
}

}  // namespace ghostphase
