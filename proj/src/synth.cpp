#include "scatterkit/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace scatterkit::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_bin(std::size_t k, std::size_t n) {
  return static_cast<long>(k) < static_cast<long>((n + 1) / 2)
             ? static_cast<double>(k)
             : static_cast<double>(k) - static_cast<double>(n);
}

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(gen);
  return out;
}

// Shape real noise by a radial spectral envelope and return the real part.
template <typename Envelope>
Signal shaped_noise(std::size_t h, std::size_t w, std::uint64_t seed, Envelope&& env) {
  std::vector<double> noise = normal_draws(h * w, seed);
  Signal raw = h == 1 ? Signal::real_1d(noise) : Signal::real_2d(noise, h, w);
  Spectrum spec = dft_forward(raw);
  for (std::size_t ky = 0; ky < h; ++ky) {
    for (std::size_t kx = 0; kx < w; ++kx) {
      const double fy = h == 1 ? 0.0 : signed_bin(ky, h);
      const double fx = signed_bin(kx, w);
      spec.values[ky * w + kx] *= env(std::hypot(fy, fx));
    }
  }
  Signal shaped = dft_inverse(spec);
  std::vector<double> real_part(shaped.size());
  for (std::size_t i = 0; i < shaped.size(); ++i) real_part[i] = shaped[i].real();
  return h == 1 ? Signal::real_1d(real_part) : Signal::real_2d(real_part, h, w);
}

}  // namespace

Signal white_noise_1d(std::size_t n, std::uint64_t seed) {
  return Signal::real_1d(normal_draws(n, seed));
}

Signal white_noise_2d(std::size_t height, std::size_t width, std::uint64_t seed) {
  return Signal::real_2d(normal_draws(height * width, seed), height, width);
}

Signal smooth_noise_1d(std::size_t n, double cutoff_bins, std::uint64_t seed) {
  return shaped_noise(1, n, seed, [cutoff_bins](double f) {
    return std::exp(-f * f / (2.0 * cutoff_bins * cutoff_bins));
  });
}

Signal smooth_noise_2d(std::size_t height, std::size_t width, double cutoff_bins,
                       std::uint64_t seed) {
  return shaped_noise(height, width, seed, [cutoff_bins](double f) {
    return std::exp(-f * f / (2.0 * cutoff_bins * cutoff_bins));
  });
}

Signal texture_2d(std::size_t height, std::size_t width, double knee_bins, std::uint64_t seed) {
  return shaped_noise(height, width, seed, [knee_bins](double f) {
    const double r = f / knee_bins;
    return 1.0 / (1.0 + r * r);
  });
}

Signal gaussian_bump_1d(std::size_t n, double sigma, double center) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double d = static_cast<double>(t) - center;
    v[t] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return Signal::real_1d(v);
}

Signal morlet_mother_1d(std::size_t n, double xi, double sigma) {
  std::vector<Complex> v(n);
  const long half = static_cast<long>(n) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const long u = static_cast<long>(i) <= half - 1
                       ? static_cast<long>(i)
                       : static_cast<long>(i) - static_cast<long>(n);
    const double uu = static_cast<double>(u);
    const double envelope = std::exp(-uu * uu / (2.0 * sigma * sigma));
    v[i] = envelope * Complex(std::cos(xi * uu), std::sin(xi * uu));
  }
  return Signal(std::move(v));
}

Signal tone_1d(std::size_t n, double bin) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t)
    v[t] = std::cos(kTwoPi * bin * static_cast<double>(t) / static_cast<double>(n));
  return Signal::real_1d(v);
}

Signal chirp_1d(std::size_t n, double start_bin, double end_bin) {
  // instantaneous bin rises linearly from start to end across the grid
  std::vector<double> v(n);
  double phase = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double frac = static_cast<double>(t) / static_cast<double>(n);
    const double inst_bin = start_bin + (end_bin - start_bin) * frac;
    v[t] = std::cos(phase);
    phase += kTwoPi * inst_bin / static_cast<double>(n);
  }
  return Signal::real_1d(v);
}

Signal hann_window(std::size_t length) {
  std::vector<double> v(length);
  for (std::size_t t = 0; t < length; ++t) {
    v[t] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(t) /
                                static_cast<double>(length));
  }
  return Signal::real_1d(v);
}

}  // namespace scatterkit::synth
