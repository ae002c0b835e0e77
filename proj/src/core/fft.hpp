#pragma once

#include <cstddef>
#include <memory>

#include "core/field.hpp"

namespace ghostphase::fft {

enum class Direction { forward, backward };

/// Shared, immutable FFTW plan. execute() may be called concurrently on
/// distinct buffers; results are unnormalised.
class Plan1D {
 public:
  Plan1D(std::size_t n, Direction dir);
  ~Plan1D();
  Plan1D(const Plan1D&) = delete;
  Plan1D& operator=(const Plan1D&) = delete;

  std::size_t size() const noexcept { return n_; }
  void execute(const cdouble* in, cdouble* out) const;

 private:
  std::size_t n_;
  void* plan_;
};

/// Cached plan for (n, dir).
std::shared_ptr<const Plan1D> plan_1d(std::size_t n, Direction dir);

/// In-place unnormalised 2-D transform of a row-major rows x cols array.
void transform_2d(cdouble* data, std::size_t rows, std::size_t cols, Direction dir);

/// Smallest 2^a 3^b 5^c 7^d that is >= n.
std::size_t fast_size(std::size_t n);

}  // namespace ghostphase::fft
