#include "scatterkit/timefreq.hpp"

#include <cmath>
#include <numbers>

#include "scatterkit/errors.hpp"
#include "scatterkit/filterbank.hpp"

namespace scatterkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Linear interpolation of a 1D signal at a fractional, circularly wrapped position.
Complex interp_circular(const Signal& s, double pos) {
  const double n = static_cast<double>(s.size());
  double p = std::fmod(pos, n);
  if (p < 0) p += n;
  const std::size_t i0 = static_cast<std::size_t>(p) % s.size();
  const std::size_t i1 = (i0 + 1) % s.size();
  const double frac = p - std::floor(p);
  return s[i0] * (1.0 - frac) + s[i1] * frac;
}

// Centers a circular density by rolling its angular centroid to the midpoint,
// then takes the ordinary second moment. Returns the standard deviation in
// index units. `density` must be nonnegative and sum to 1.
double circular_centered_std(const std::vector<double>& density) {
  const std::size_t n = density.size();
  double cre = 0.0, cim = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double angle = kTwoPi * static_cast<double>(t) / static_cast<double>(n);
    cre += density[t] * std::cos(angle);
    cim += density[t] * std::sin(angle);
  }
  double centroid = 0.0;
  if (std::hypot(cre, cim) > 1e-14) {
    centroid = std::atan2(cim, cre) / kTwoPi * static_cast<double>(n);
    if (centroid < 0) centroid += static_cast<double>(n);
  }
  const long roll = static_cast<long>(std::lround(static_cast<double>(n) / 2.0 - centroid));

  double mean = 0.0;
  std::vector<double> rolled(n);
  for (std::size_t t = 0; t < n; ++t) {
    const long src = (static_cast<long>(t) - roll % static_cast<long>(n) +
                      2 * static_cast<long>(n)) % static_cast<long>(n);
    rolled[t] = density[static_cast<std::size_t>(src)];
    mean += rolled[t] * static_cast<double>(t);
  }
  double var = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double d = static_cast<double>(t) - mean;
    var += rolled[t] * d * d;
  }
  return std::sqrt(std::max(0.0, var));
}

}  // namespace

TimeFreqMap windowed_fourier(const Signal& x, const Signal& window, std::size_t hop) {
  if (x.empty() || window.empty()) throw InvalidInputError("windowed_fourier: empty input");
  if (x.dim() != 1 || window.dim() != 1)
    throw InvalidInputError("windowed_fourier: 1D signals required");
  if (window.size() > x.size())
    throw InvalidInputError("windowed_fourier: window longer than signal");
  if (hop == 0 || x.size() % hop != 0)
    throw InvalidInputError("windowed_fourier: hop must divide the signal length");

  const std::size_t n = x.size();
  // zero-extend the window to the full grid
  std::vector<Complex> w(n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < window.size(); ++i) w[i] = window[i];

  TimeFreqMap map;
  map.frames = n / hop;
  map.bins = n;
  map.hop = hop;
  map.window_length = window.size();
  map.values.resize(map.frames * n);

  std::vector<Complex> frame(n);
  for (std::size_t m = 0; m < map.frames; ++m) {
    const std::size_t shift = (m * hop) % n;
    for (std::size_t u = 0; u < n; ++u) frame[u] = x[u] * w[(u + n - shift) % n];
    Spectrum F = dft_forward(Signal(frame, x.step()));
    for (std::size_t b = 0; b < n; ++b) map.values[m * n + b] = F.values[b];
  }
  return map;
}

Signal dilate_mother(const Signal& mother, double scale, double p) {
  if (mother.empty()) throw InvalidInputError("dilate_mother: empty mother wavelet");
  if (scale == 0.0) throw InvalidInputError("dilate_mother: zero scale");
  const std::size_t n = mother.size();
  const double amp = std::pow(std::abs(scale), -p);
  const long half = static_cast<long>(n) / 2;

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // signed grid coordinate about the origin
    const long u = static_cast<long>(i) <= half - 1 ? static_cast<long>(i)
                                                    : static_cast<long>(i) - static_cast<long>(n);
    out[i] = amp * interp_circular(mother, static_cast<double>(u) / scale);
  }
  // Resampling leaves a small residual mean; recenter so zero-mean analysis
  // properties survive discretization.
  return zero_mean_correct(Signal(std::move(out), mother.step()));
}

ScaleTimeMap cwt(const Signal& x, const Signal& mother, const std::vector<double>& scales,
                 double p) {
  if (x.empty() || mother.empty()) throw InvalidInputError("cwt: empty input");
  if (x.dim() != 1 || mother.dim() != 1) throw InvalidInputError("cwt: 1D signals required");
  if (mother.size() != x.size())
    throw InvalidInputError("cwt: mother wavelet must share the signal grid");
  if (scales.empty()) throw InvalidInputError("cwt: no scales given");
  for (double s : scales)
    if (s == 0.0) throw InvalidInputError("cwt: zero scale");
  const double mean_mag = std::abs(total_sum(mother)) / static_cast<double>(mother.size());
  if (mean_mag > 1e-8) throw InvalidInputError("cwt: mother wavelet must have zero mean");

  ScaleTimeMap map;
  map.rows = scales.size();
  map.cols = x.size();
  map.scales = scales;
  map.p = p;
  map.values.resize(map.rows * map.cols);

  for (std::size_t i = 0; i < scales.size(); ++i) {
    Signal row = convolve_fft(x, dilate_mother(mother, scales[i], p));
    for (std::size_t t = 0; t < map.cols; ++t) map.values[i * map.cols + t] = row[t];
  }
  return map;
}

SpreadReport measure_spread(const Signal& x) {
  if (x.empty()) throw InvalidInputError("measure_spread: empty signal");
  if (x.dim() != 1) throw InvalidInputError("measure_spread: 1D signals only");
  const double energy = l2_norm(x) * l2_norm(x);
  if (energy <= 0.0) throw InvalidInputError("measure_spread: zero signal");

  const std::size_t n = x.size();
  std::vector<double> time_density(n);
  for (std::size_t t = 0; t < n; ++t) time_density[t] = std::norm(x[t]) / energy;

  Spectrum X = dft_forward(x);
  double spec_energy = 0.0;
  for (const Complex& v : X.values) spec_energy += std::norm(v);
  std::vector<double> freq_density(n);
  for (std::size_t k = 0; k < n; ++k) freq_density[k] = std::norm(X.values[k]) / spec_energy;

  SpreadReport report;
  report.time_spread = circular_centered_std(time_density) * x.step();
  // frequency bins are spaced 1/(n*step) cycles per unit
  report.freq_spread =
      circular_centered_std(freq_density) / (static_cast<double>(n) * x.step());
  report.product = report.time_spread * report.freq_spread;
  return report;
}

UncertaintyReport uncertainty_check(const std::vector<Signal>& family) {
  if (family.empty()) throw InvalidInputError("uncertainty_check: empty signal family");
  UncertaintyReport report;
  report.baseline = kGaussianSpreadProduct;
  report.min_product = 0.0;
  const double floor = kGaussianSpreadProduct * (1.0 - 1e-3);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double product = measure_spread(family[i]).product;
    if (i == 0 || product < report.min_product) {
      report.min_product = product;
      report.argmin = i;
    }
    if (product < floor) report.violators.push_back(i);
  }
  report.passed = report.violators.empty();
  return report;
}

}  // namespace scatterkit
