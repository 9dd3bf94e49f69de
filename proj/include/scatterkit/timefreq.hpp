#pragma once

#include <cstddef>
#include <vector>

#include "scatterkit/signal.hpp"

namespace scatterkit {

/// Windowed-Fourier coefficients: rows are analysis frames, columns frequency
/// bins in standard FFT order. Framing is circular, so frame count is exactly
/// signal length / hop.
struct TimeFreqMap {
  std::vector<Complex> values;  // frames x bins, row-major
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::size_t hop = 0;
  std::size_t window_length = 0;

  Complex at(std::size_t frame, std::size_t bin) const { return values[frame * bins + bin]; }
};

/// Continuous-wavelet coefficients: one row per analysis scale.
struct ScaleTimeMap {
  std::vector<Complex> values;  // scales x time, row-major
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> scales;
  double p = 1.0;  // dilation normalization exponent

  Complex at(std::size_t scale_idx, std::size_t t) const { return values[scale_idx * cols + t]; }
};

/// Second-moment time/frequency spreads and their product.
struct SpreadReport {
  double time_spread = 0.0;   // T
  double freq_spread = 0.0;   // Omega
  double product = 0.0;       // Omega * T
};

struct UncertaintyReport {
  double min_product = 0.0;
  std::size_t argmin = 0;
  std::vector<std::size_t> violators;  // indices with product below the tolerance band
  double baseline = 0.0;               // Gaussian spread product the family is held against
  bool passed = false;
};

/// Spread product of the Gaussian, the minimizer of the second-moment
/// uncertainty product under this transform convention. Value frozen from a
/// high-resolution quadrature of the continuous definition (tests recompute it).
inline constexpr double kGaussianSpreadProduct = 0.07957747154594767;

/// Windowed Fourier transform with circularly shifted windows. A window
/// shorter than the signal is zero-extended; hop must divide the signal
/// length. Row m holds the DFT of x .* shift(window, m*hop).
TimeFreqMap windowed_fourier(const Signal& x, const Signal& window, std::size_t hop);

/// The dilated wavelet used for one CWT row: the mother resampled by
/// |s|^{-p} psi(u/s) with circular linear interpolation (u signed about the
/// origin), then re-centered to exact zero mean.
Signal dilate_mother(const Signal& mother, double scale, double p);

/// Continuous wavelet transform: row i = x convolved with the mother dilated
/// to scales[i]. The mother must have zero mean; scales must be nonzero.
ScaleTimeMap cwt(const Signal& x, const Signal& mother, const std::vector<double>& scales,
                 double p = 1.0);

/// Time and frequency spreads of a 1D signal as standard deviations of the
/// normalized energy densities |x|^2/||x||^2 and |x_hat|^2/||x_hat||^2. Both
/// densities are centered by rolling their circular centroid to the midpoint
/// before the linear moments are taken.
SpreadReport measure_spread(const Signal& x);

/// Evaluates measure_spread over a family and reports the minimum product
/// against the Gaussian baseline; passes when no signal dips below
/// baseline * (1 - 1e-3).
UncertaintyReport uncertainty_check(const std::vector<Signal>& family);

}  // namespace scatterkit
