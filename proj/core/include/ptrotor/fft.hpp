#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ptrotor {

/// In-place 1-D complex FFT over an owned, FFTW-aligned buffer.
///
/// Plans are created with FFTW_ESTIMATE so that the same size always yields
/// the same algorithm and therefore bit-identical results across runs.
/// Plan creation is serialized internally; execution of distinct instances is
/// safe from different threads.
class Fft {
 public:
  explicit Fft(std::size_t size);
  ~Fft();
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::span<std::complex<double>> data() noexcept { return {buffer_, size_}; }
  std::span<const std::complex<double>> data() const noexcept { return {buffer_, size_}; }

  /// sum_j f_j exp(-2 pi i j k / n), unnormalized.
  void forward() noexcept;
  /// sum_k F_k exp(+2 pi i j k / n), unnormalized.
  void backward() noexcept;

 private:
  void release() noexcept;

  std::size_t size_ = 0;
  std::complex<double>* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

std::size_t next_power_of_two(std::size_t n) noexcept;

/// Index of signed frequency/momentum k on a periodic grid of the given size.
inline std::size_t wrap_index(long k, std::size_t size) noexcept {
  const long n = static_cast<long>(size);
  long r = k % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

}  // namespace ptrotor
