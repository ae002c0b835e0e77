#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "core/error.hpp"

namespace ghostphase::fft {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int sign_of(Direction dir) { return dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

Plan1D::Plan1D(std::size_t n, Direction dir) : n_(n), plan_(nullptr) {
  std::lock_guard lock(planner_mutex());
  auto* in = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign_of(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (plan_ == nullptr) throw_numerical("FFTW could not create a 1-D plan");
}

Plan1D::~Plan1D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Plan1D::execute(const cdouble* in, cdouble* out) const {
  // FFTW takes a non-const input pointer; out-of-place plans leave it untouched.
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::shared_ptr<const Plan1D> plan_1d(std::size_t n, Direction dir) {
  static std::mutex cache_mutex;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const Plan1D>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{n, sign_of(dir)}];
  if (!slot) slot = std::make_shared<const Plan1D>(n, dir);
  return slot;
}

void transform_2d(cdouble* data, std::size_t rows, std::size_t cols, Direction dir) {
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, sign_of(dir),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (plan == nullptr) throw_numerical("FFTW could not create a 2-D plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

std::size_t fast_size(std::size_t n) {
  if (n <= 1) return 1;
  std::size_t best = 1;
  while (best < n) best <<= 1;
  for (std::size_t p7 = 1; p7 < best; p7 *= 7)
    for (std::size_t p5 = p7; p5 < best; p5 *= 5)
      for (std::size_t p3 = p5; p3 < best; p3 *= 3) {
        std::size_t v = p3;
        while (v < n) v <<= 1;
        if (v < best) best = v;
      }
  return best;
}

}  // namespace ghostphase::fft
