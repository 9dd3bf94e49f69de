#pragma once

// Deterministic signal generators for experiments, fixtures and the CLI's
// --synthetic inputs. Everything is a pure function of its arguments; the
// same seed always reproduces the same signal on a given platform.

#include <cstdint>
#include <cstddef>

#include "scatterkit/signal.hpp"

namespace scatterkit::synth {

Signal white_noise_1d(std::size_t n, std::uint64_t seed);
Signal white_noise_2d(std::size_t height, std::size_t width, std::uint64_t seed);

/// Real Gaussian noise shaped by a Gaussian spectral envelope of the given
/// width (in frequency bins); larger cutoff means rougher output.
Signal smooth_noise_1d(std::size_t n, double cutoff_bins, std::uint64_t seed);
Signal smooth_noise_2d(std::size_t height, std::size_t width, double cutoff_bins,
                       std::uint64_t seed);

/// Natural-looking random texture: noise with a 1/(1 + (f/knee)^2) spectral
/// rolloff, so low frequencies dominate the energy budget.
Signal texture_2d(std::size_t height, std::size_t width, double knee_bins, std::uint64_t seed);

Signal gaussian_bump_1d(std::size_t n, double sigma, double center);

/// Raw sampled Morlet e^{i xi u} e^{-u^2/(2 sigma^2)} about the grid origin
/// (signed coordinates, circular). Uncorrected: carries the small residual
/// mean of the discrete samples.
Signal morlet_mother_1d(std::size_t n, double xi, double sigma);

Signal tone_1d(std::size_t n, double bin);
Signal chirp_1d(std::size_t n, double start_bin, double end_bin);
Signal hann_window(std::size_t length);

}  // namespace scatterkit::synth
