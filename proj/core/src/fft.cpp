#include "ptrotor/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

namespace ptrotor {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t size) : size_(size) {
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (buffer_ == nullptr) throw std::bad_alloc();
  auto* raw = reinterpret_cast<fftw_complex*>(buffer_);
  const int n = static_cast<int>(size);
  forward_plan_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  for (std::size_t i = 0; i < size; ++i) buffer_[i] = {};
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : size_(std::exchange(other.size_, 0)),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    size_ = std::exchange(other.size_, 0);
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Fft::release() noexcept {
  if (buffer_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
  buffer_ = nullptr;
}

void Fft::forward() noexcept { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void Fft::backward() noexcept { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace ptrotor
