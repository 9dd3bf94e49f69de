#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scatterkit/signal.hpp"

namespace scatterkit {

enum class Normalization { L1, L2 };

/// Parameters of a Morlet wavelet bank on a fixed grid.
///
/// J is the maximum scale index; the averaging kernel phi lives at scale 2^J
/// and 2^J may not exceed any grid dimension. K is the number of wavelets per
/// scale: orientations spread over the full circle in 2D, sub-octave
/// divisions in 1D. xi is the mother's center frequency in radians per
/// sample, sigma its spatial envelope width at scale index 0 (the scale-j
/// envelope is sigma * 2^j). slant compresses the 2D envelope tangentially,
/// trading orientation selectivity against angular coverage.
struct BankConfig {
  int J = 3;
  int K = 8;
  int dim = 2;
  std::size_t height = 32;  // 1 for dim == 1
  std::size_t width = 32;
  double xi = 2.356194490192345;  // 3*pi/4
  double sigma = 0.65;
  double slant = 0.75;
  Normalization normalization = Normalization::L1;

  std::size_t grid_size() const { return height * width; }
};

/// An immutable Morlet filter bank: the low-pass phi_J plus wavelets psi_{j,k}
/// for j in [0, J), k in [1, K], dilated by the rule psi_{j,k}(u) =
/// 2^{-j n} psi_k(2^{-j} u). Filters are constructed and stored in the
/// frequency domain on the signal's grid (alias-folded samples of the
/// continuous profiles); phi is additionally materialized in space.
///
/// Construction guarantees: sum(phi) = 1, every wavelet has exactly zero DC,
/// and after frame normalization the Littlewood-Paley sum stays <= 1.
struct FilterBank {
  BankConfig config;
  Signal phi;                                 // spatial, real, sums to 1
  std::vector<Complex> phi_hat;               // spectrum of phi on the grid
  std::vector<std::vector<Complex>> psi_hat;  // index j*K + (k-1)
  double frame_a = 0.0;
  double frame_b = 0.0;
  std::vector<std::string> warnings;          // aliasing diagnostics, not errors

  // k is 1-based, matching the (j, k) indexing used everywhere else.
  const std::vector<Complex>& psi(int j, int k) const { return psi_hat[j * config.K + (k - 1)]; }
  Signal psi_spatial(int j, int k) const;
  std::size_t wavelet_count() const { return psi_hat.size(); }
};

/// Builds the bank for a config, enforcing the zero-mean and unit-integral
/// invariants exactly and rescaling the wavelets so the Littlewood-Paley
/// bound B stays at (just under) 1.
FilterBank build_bank(const BankConfig& config);

/// Frame diagnostic: (A, B) = min/max over nonzero frequency grid points of
/// |phi_hat|^2 + sum_{j,k} |psi_hat|^2. In 1D the sum also includes the
/// reflected responses |psi_hat(-w)|^2 so real signals are covered by the
/// analytic (positive-frequency) wavelets.
std::pair<double, double> littlewood_paley(const FilterBank& bank);

/// Removes the residual mean of a sampled wavelet by subtracting a scaled
/// copy of its own envelope |psi|. Output mean magnitude <= 1e-12; a constant
/// input comes back as the zero signal.
Signal zero_mean_correct(const Signal& psi);

/// Binary container + JSON metadata sidecar. The binary round-trips
/// bit-exactly; the sidecar is informational.
void save_bank(const FilterBank& bank, const std::string& path);
FilterBank load_bank(const std::string& path);

}  // namespace scatterkit
