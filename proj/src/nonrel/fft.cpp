#include "nonrel/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace so21::nonrel::fft {

namespace {

enum class Layout { Full2d, Rows, Cols };

struct FftwBuffer {
  explicit FftwBuffer(std::size_t count)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

// A plan owns the buffer it was created on; execution copies through it so
// callers never need FFTW-aligned storage.
struct Plan {
  Plan(std::size_t n, Layout layout, int sign) : size(n * n), buffer(n * n) {
    const int ni = static_cast<int>(n);
    switch (layout) {
      case Layout::Full2d:
        plan = fftw_plan_dft_2d(ni, ni, buffer.ptr, buffer.ptr, sign, FFTW_ESTIMATE);
        break;
      case Layout::Rows:
        plan = fftw_plan_many_dft(1, &ni, ni, buffer.ptr, nullptr, 1, ni, buffer.ptr, nullptr, 1,
                                  ni, sign, FFTW_ESTIMATE);
        break;
      case Layout::Cols:
        plan = fftw_plan_many_dft(1, &ni, ni, buffer.ptr, nullptr, ni, 1, buffer.ptr, nullptr, ni,
                                  1, sign, FFTW_ESTIMATE);
        break;
    }
  }
  ~Plan() { fftw_destroy_plan(plan); }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  std::size_t size;
  FftwBuffer buffer;
  fftw_plan plan = nullptr;
  std::mutex exec;
};

Plan& cached_plan(std::size_t n, Layout layout, int sign) {
  // FFTW planning is not thread-safe; execution through distinct plans is.
  static std::mutex planner;
  static std::map<std::tuple<std::size_t, Layout, int>, std::unique_ptr<Plan>> plans;
  std::lock_guard lock(planner);
  auto& slot = plans[{n, layout, sign}];
  if (!slot) slot = std::make_unique<Plan>(n, layout, sign);
  return *slot;
}

void run(Eigen::ArrayXcd& data, std::size_t n, Layout layout, int sign, double scale) {
  Plan& p = cached_plan(n, layout, sign);
  std::lock_guard lock(p.exec);
  auto* buf = reinterpret_cast<std::complex<double>*>(p.buffer.ptr);
  std::copy(data.data(), data.data() + p.size, buf);
  fftw_execute(p.plan);
  for (std::size_t i = 0; i < p.size; ++i) data[static_cast<Eigen::Index>(i)] = buf[i] * scale;
}

}  // namespace

void forward_2d(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Full2d, FFTW_FORWARD, 1.0);
}
void inverse_2d(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Full2d, FFTW_BACKWARD, 1.0 / static_cast<double>(n * n));
}
void forward_rows(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Rows, FFTW_FORWARD, 1.0);
}
void inverse_rows(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Rows, FFTW_BACKWARD, 1.0 / static_cast<double>(n));
}
void forward_cols(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Cols, FFTW_FORWARD, 1.0);
}
void inverse_cols(Eigen::ArrayXcd& data, std::size_t n) {
  run(data, n, Layout::Cols, FFTW_BACKWARD, 1.0 / static_cast<double>(n));
}

}  // namespace so21::nonrel::fft
