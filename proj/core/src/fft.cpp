#include "rlab/fft.hpp"

#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace rlab::fft {

namespace {

// FFTW planning is not thread-safe; execution with new-array plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform(std::span<Complex> data, const GridShape& shape, int sign) {
  if (static_cast<std::int64_t>(data.size()) != shape.cells()) {
    throw std::invalid_argument("fft: data size does not match grid shape");
  }
  if (data.empty()) return;
  const int n = static_cast<int>(shape.n);
  const int dims[2] = {n, n};
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(shape.dim, dims, buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fft: planning failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(std::span<Complex> data, const GridShape& shape) { transform(data, shape, FFTW_FORWARD); }

void inverse(std::span<Complex> data, const GridShape& shape) { transform(data, shape, FFTW_BACKWARD); }

std::vector<Complex> forward_real(std::span<const double> values, const GridShape& shape) {
  std::vector<Complex> out(values.begin(), values.end());
  forward(out, shape);
  return out;
}

std::vector<Complex> circular_convolve(std::span<const Complex> a, std::span<const Complex> b,
                                       const GridShape& shape) {
  std::vector<Complex> fa(a.begin(), a.end());
  std::vector<Complex> fb(b.begin(), b.end());
  forward(fa, shape);
  forward(fb, shape);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  inverse(fa, shape);
  const double scale = 1.0 / static_cast<double>(shape.cells());
  for (auto& v : fa) v *= scale;
  return fa;
}

std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b, const GridShape& shape) {
  std::vector<Complex> ca(a.begin(), a.end());
  std::vector<Complex> cb(b.begin(), b.end());
  const auto c = circular_convolve(std::span<const Complex>(ca), std::span<const Complex>(cb), shape);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

}  // namespace rlab::fft
