#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace multspec::detail {

namespace {

// FFTW planning is not reentrant; execution on a fixed plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void dft(std::vector<Complex<double>>& data, int sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void dft(std::vector<Complex<Quad>>& data, int sign) {
  static_assert(sizeof(Complex<Quad>) == sizeof(fftwq_complex));
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftwq_complex*>(data.data());
  fftwq_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftwq_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  fftwq_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftwq_destroy_plan(plan);
}

}  // namespace multspec::detail
