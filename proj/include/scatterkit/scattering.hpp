#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "scatterkit/filterbank.hpp"
#include "scatterkit/signal.hpp"

namespace scatterkit {

/// Nonlinearity applied after each wavelet convolution. Modulus is the
/// default and the one the transform's stability rests on; the rectifier and
/// sigmoid act on the real part and are provided for experimentation.
enum class Rho { Modulus, Rectifier, Sigmoid };

/// One branch of the scattering tree: the ordered wavelet indices
/// (j1,k1)...(jm,km) applied along the cascade. The empty path is order 0.
/// Under the default frequency-decreasing pruning, j strictly increases
/// along the path.
struct PathIndex {
  std::vector<std::pair<int, int>> lambdas;  // (j, k), k is 1-based

  int order() const { return static_cast<int>(lambdas.size()); }
  /// Canonical name: "m0", "m1_j2k5", "m2_j0k3_j2k5", ...
  std::string name() const;
  bool operator==(const PathIndex&) const = default;
};

/// Canonical path order: by order, then j-sequence, then k-sequence.
bool canonical_less(const PathIndex& a, const PathIndex& b);

struct ScatterConfig {
  int max_order = 2;
  int oversampling = 0;  // halves the output subsampling per unit
  Rho rho = Rho::Modulus;
  bool all_paths = false;             // disable frequency-decreasing pruning
  bool internal_subsampling = false;  // decimate intermediates dyadically (faster, approximate)
};

/// Output of the transform: one subsampled real signal per path, held in
/// canonical path order.
class ScatteringCoefficients {
public:
  ScatteringCoefficients() = default;
  ScatteringCoefficients(BankConfig bank_config, ScatterConfig config,
                         std::size_t output_subsample);

  void add(PathIndex path, Signal entry);
  void sort_canonical();

  const Signal& at(const PathIndex& path) const;  // throws InvalidInputError if absent
  const std::vector<std::pair<PathIndex, Signal>>& entries() const { return entries_; }
  const BankConfig& bank_config() const { return bank_config_; }
  const ScatterConfig& scatter_config() const { return config_; }
  std::size_t output_subsample() const { return output_subsample_; }

  /// Factor that maps subsampled-entry L2 norms back to full-grid scale:
  /// multiply an entry (or feature-vector) norm by this to approximate the
  /// norm before decimation.
  double norm_rescale() const;

private:
  std::vector<std::pair<PathIndex, Signal>> entries_;
  BankConfig bank_config_;
  ScatterConfig config_;
  std::size_t output_subsample_ = 1;
};

/// All frequency-decreasing paths (j strictly increasing) of order up to
/// max_order, in canonical order. max_order must not exceed J.
std::vector<PathIndex> path_enumerate(int J, int K, int max_order);

/// Unpruned variant: every tree path of order up to max_order.
std::vector<PathIndex> path_enumerate_all(int J, int K, int max_order);

/// The full scattering transform: for every path p, S[p] = rho(...rho(x *
/// psi_{l1}) ... * psi_{lm}) * phi_J, subsampled by 2^(J - oversampling).
/// The order-0 entry is x * phi_J.
ScatteringCoefficients scatter(const Signal& x, const ScatterConfig& config,
                               const FilterBank& bank);

/// Orders 0 and 1 only: the first-order invariant map |x * psi_{j,k}| * phi_J.
ScatteringCoefficients first_order_map(const Signal& x, const FilterBank& bank);

/// Flattens coefficients into a deterministic feature vector: paths in
/// canonical order, each entry in row-major spatial order.
std::vector<double> feature_vector(const ScatteringCoefficients& coeffs);

/// One column label per feature-vector element: "<path>_s<index>".
std::vector<std::string> feature_column_names(const ScatteringCoefficients& coeffs);

/// Binary coefficient container (path table + little-endian doubles).
void save_coefficients(const ScatteringCoefficients& coeffs, const std::string& path);
ScatteringCoefficients load_coefficients(const std::string& path);

/// CSV: header of column names, then one row with the feature vector.
void write_coefficients_csv(const ScatteringCoefficients& coeffs, std::ostream& os);

}  // namespace scatterkit
