#include "scatterkit/signal.hpp"

#include <cmath>
#include <string>

#include "fft_internal.hpp"
#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

void validate(const std::vector<Complex>& values, double step) {
  if (values.empty()) throw InvalidInputError("signal must contain at least one sample");
  if (!(step > 0.0)) throw InvalidInputError("signal step must be positive");
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidInputError("signal values must all be finite");
  }
}

std::size_t wrap(long i, std::size_t n) {
  long m = i % static_cast<long>(n);
  if (m < 0) m += static_cast<long>(n);
  return static_cast<std::size_t>(m);
}

void require_nonempty(const Signal& x, const char* op) {
  if (x.empty()) throw InvalidInputError(std::string(op) + ": empty signal");
}

void require_same_shape(const Signal& x, const Signal& h, const char* op) {
  require_nonempty(x, op);
  require_nonempty(h, op);
  if (!x.same_shape(h)) throw InvalidInputError(std::string(op) + ": shape mismatch");
}

}  // namespace

Signal::Signal(std::vector<Complex> values, double step)
    : values_(std::move(values)), height_(1), width_(values_.size()), dim_(1), step_(step) {
  validate(values_, step_);
}

Signal::Signal(std::vector<Complex> values, std::size_t height, std::size_t width, double step)
    : values_(std::move(values)), height_(height), width_(width), dim_(2), step_(step) {
  if (height_ == 0 || width_ == 0 || values_.size() != height_ * width_)
    throw InvalidInputError("2D signal dimensions do not match value count");
  validate(values_, step_);
}

Signal Signal::real_1d(const std::vector<double>& values, double step) {
  std::vector<Complex> v(values.begin(), values.end());
  return Signal(std::move(v), step);
}

Signal Signal::real_2d(const std::vector<double>& values, std::size_t height,
                       std::size_t width, double step) {
  std::vector<Complex> v(values.begin(), values.end());
  return Signal(std::move(v), height, width, step);
}

Signal Signal::zeros_1d(std::size_t n, double step) {
  return Signal(std::vector<Complex>(n, Complex(0.0, 0.0)), step);
}

Signal Signal::zeros_2d(std::size_t height, std::size_t width, double step) {
  return Signal(std::vector<Complex>(height * width, Complex(0.0, 0.0)), height, width, step);
}

Signal Signal::zeros_like(const Signal& s) {
  if (s.dim() == 1) return zeros_1d(s.size(), s.step());
  return zeros_2d(s.height(), s.width(), s.step());
}

Complex Signal::at_wrapped(long y, long x) const {
  return values_[wrap(y, height_) * width_ + wrap(x, width_)];
}

void Signal::set_step(double step) {
  if (!(step > 0.0)) throw InvalidInputError("signal step must be positive");
  step_ = step;
}

Spectrum dft_forward(const Signal& x) {
  require_nonempty(x, "dft_forward");
  Spectrum X;
  X.values.resize(x.size());
  X.height = x.height();
  X.width = x.width();
  X.dim = x.dim();
  X.step = x.step();
  detail::fft_c2c(x.height(), x.width(), -1, x.values().data(), X.values.data());
  return X;
}

Signal dft_inverse(const Spectrum& X) {
  if (X.values.empty()) throw InvalidInputError("dft_inverse: empty spectrum");
  std::vector<Complex> out(X.size());
  detail::fft_c2c(X.height, X.width, +1, X.values.data(), out.data());
  const double scale = 1.0 / static_cast<double>(X.size());
  for (Complex& v : out) v *= scale;
  if (X.dim == 1) return Signal(std::move(out), X.step);
  return Signal(std::move(out), X.height, X.width, X.step);
}

Signal convolve_direct(const Signal& x, const Signal& h) {
  require_same_shape(x, h, "convolve_direct");
  Signal out = Signal::zeros_like(x);
  const long H = static_cast<long>(x.height());
  const long W = static_cast<long>(x.width());
  for (long ty = 0; ty < H; ++ty) {
    for (long tx = 0; tx < W; ++tx) {
      Complex acc(0.0, 0.0);
      for (long uy = 0; uy < H; ++uy) {
        for (long ux = 0; ux < W; ++ux) {
          acc += x.at(static_cast<std::size_t>(uy), static_cast<std::size_t>(ux)) *
                 h.at_wrapped(ty - uy, tx - ux);
        }
      }
      out.at(static_cast<std::size_t>(ty), static_cast<std::size_t>(tx)) = acc;
    }
  }
  return out;
}

Signal convolve_fft(const Signal& x, const Signal& h) {
  require_same_shape(x, h, "convolve_fft");
  Spectrum X = dft_forward(x);
  Spectrum Hs = dft_forward(h);
  for (std::size_t i = 0; i < X.size(); ++i) X.values[i] *= Hs.values[i];
  return dft_inverse(X);
}

Signal modulus(const Signal& x) {
  require_nonempty(x, "modulus");
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Complex(std::abs(x[i]), 0.0);
  if (x.dim() == 1) return Signal(std::move(out), x.step());
  return Signal(std::move(out), x.height(), x.width(), x.step());
}

Signal subsample(const Signal& x, std::size_t factor) {
  require_nonempty(x, "subsample");
  if (factor == 0) throw InvalidInputError("subsample: factor must be positive");
  if (x.width() % factor != 0 || (x.dim() == 2 && x.height() % factor != 0))
    throw InvalidInputError("subsample: factor must divide each grid dimension");
  if (factor == 1) return x;

  if (x.dim() == 1) {
    std::vector<Complex> out(x.width() / factor);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i * factor];
    return Signal(std::move(out), x.step() * static_cast<double>(factor));
  }
  const std::size_t oh = x.height() / factor;
  const std::size_t ow = x.width() / factor;
  std::vector<Complex> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t xx = 0; xx < ow; ++xx)
      out[y * ow + xx] = x.at(y * factor, xx * factor);
  return Signal(std::move(out), oh, ow, x.step() * static_cast<double>(factor));
}

Signal circular_shift(const Signal& x, long shift) {
  require_nonempty(x, "circular_shift");
  if (x.dim() != 1) throw InvalidInputError("circular_shift: scalar shift requires a 1D signal");
  std::vector<Complex> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t)
    out[t] = x.at_wrapped(0, static_cast<long>(t) - shift);
  return Signal(std::move(out), x.step());
}

Signal circular_shift(const Signal& x, long dy, long dx) {
  require_nonempty(x, "circular_shift");
  if (x.dim() != 2) throw InvalidInputError("circular_shift: (dy, dx) shift requires a 2D signal");
  std::vector<Complex> out(x.size());
  for (std::size_t y = 0; y < x.height(); ++y)
    for (std::size_t xx = 0; xx < x.width(); ++xx)
      out[y * x.width() + xx] =
          x.at_wrapped(static_cast<long>(y) - dy, static_cast<long>(xx) - dx);
  return Signal(std::move(out), x.height(), x.width(), x.step());
}

double l1_norm(const Signal& x) {
  double acc = 0.0;
  for (const Complex& v : x.values()) acc += std::abs(v);
  return acc;
}

double l2_norm(const Signal& x) {
  double acc = 0.0;
  for (const Complex& v : x.values()) acc += std::norm(v);
  return std::sqrt(acc);
}

Complex total_sum(const Signal& x) {
  Complex acc(0.0, 0.0);
  for (const Complex& v : x.values()) acc += v;
  return acc;
}

Spectrum hadamard(const Spectrum& a, const Spectrum& b) {
  if (a.height != b.height || a.width != b.width || a.dim != b.dim)
    throw InvalidInputError("hadamard: shape mismatch");
  Spectrum out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= b.values[i];
  return out;
}

}  // namespace scatterkit
