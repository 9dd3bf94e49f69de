#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace scatterkit {

using Complex = std::complex<double>;

/// A discrete complex-valued signal on a regular 1D or 2D grid (row-major in 2D).
///
/// Grids are circular: every operation that indexes past an edge wraps around.
/// Construction validates the invariants (non-empty, finite values, step > 0);
/// a default-constructed Signal is the only empty one and is rejected by all
/// operations.
class Signal {
public:
  Signal() = default;

  /// 1D signal of length values.size().
  explicit Signal(std::vector<Complex> values, double step = 1.0);

  /// 2D signal, row-major, height x width.
  Signal(std::vector<Complex> values, std::size_t height, std::size_t width,
         double step = 1.0);

  static Signal real_1d(const std::vector<double>& values, double step = 1.0);
  static Signal real_2d(const std::vector<double>& values, std::size_t height,
                        std::size_t width, double step = 1.0);
  static Signal zeros_1d(std::size_t n, double step = 1.0);
  static Signal zeros_2d(std::size_t height, std::size_t width, double step = 1.0);
  static Signal zeros_like(const Signal& s);

  int dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  double step() const { return step_; }
  bool empty() const { return values_.empty(); }
  bool same_shape(const Signal& other) const {
    return dim_ == other.dim_ && height_ == other.height_ && width_ == other.width_;
  }

  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  // Row-major 2D access; in 1D pass y = 0.
  Complex at(std::size_t y, std::size_t x) const { return values_[y * width_ + x]; }
  Complex& at(std::size_t y, std::size_t x) { return values_[y * width_ + x]; }

  // Circular access with signed indices.
  Complex at_wrapped(long y, long x) const;

  void set_step(double step);

private:
  std::vector<Complex> values_;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  int dim_ = 1;
  double step_ = 1.0;
};

/// Frequency-domain counterpart of a Signal: same shape, DC at index 0,
/// frequencies in standard FFT order.
struct Spectrum {
  std::vector<Complex> values;
  std::size_t height = 0;
  std::size_t width = 0;
  int dim = 1;
  double step = 1.0;  // grid spacing of the source signal

  std::size_t size() const { return values.size(); }
};

/// Unnormalized forward DFT (kernel e^{-2*pi*i*k*t/n}, separable in 2D).
Spectrum dft_forward(const Signal& x);

/// Inverse DFT with 1/n scaling; exact round-trip with dft_forward.
Signal dft_inverse(const Spectrum& X);

/// Circular convolution by direct double-loop summation. O(n^2); this is the
/// brute-force oracle the FFT path is checked against.
Signal convolve_direct(const Signal& x, const Signal& h);

/// Circular convolution via the convolution theorem. O(n log n).
Signal convolve_fft(const Signal& x, const Signal& h);

/// Pointwise complex modulus; output is real-valued.
Signal modulus(const Signal& x);

/// Keep every factor-th sample in each dimension; step is multiplied by factor.
/// The factor must divide each grid dimension.
Signal subsample(const Signal& x, std::size_t factor);

/// Circular shift of a 1D signal: out(t) = x(t - shift).
Signal circular_shift(const Signal& x, long shift);

/// Circular shift of a 2D signal: out(y, x) = in(y - dy, x - dx).
Signal circular_shift(const Signal& x, long dy, long dx);

double l1_norm(const Signal& x);
double l2_norm(const Signal& x);
Complex total_sum(const Signal& x);

/// Pointwise product of two spectra (the frequency-domain face of convolution).
Spectrum hadamard(const Spectrum& a, const Spectrum& b);

}  // namespace scatterkit
