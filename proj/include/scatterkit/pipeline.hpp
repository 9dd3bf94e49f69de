#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scatterkit/dataset.hpp"
#include "scatterkit/filterbank.hpp"
#include "scatterkit/linear.hpp"
#include "scatterkit/scattering.hpp"

namespace scatterkit {

/// Scatters every sample and stacks the feature vectors; row i depends only
/// on sample i, and parallel extraction produces the same bytes as a serial
/// run. threads <= 0 defers to SCATTERKIT_THREADS (0 or unset: one per core).
FeatureMatrix extract_features(const LabeledDataset& dataset, const ScatterConfig& config,
                               const FilterBank& bank, int threads = 0);

/// Raw-pixel features through the identical classifier interface: one row per
/// sample, columns in row-major pixel order.
FeatureMatrix flatten_pixels(const LabeledDataset& dataset);

/// Binary feature-matrix container (rows, cols, labels, row-major doubles).
void save_feature_matrix(const FeatureMatrix& features, const std::string& path);
FeatureMatrix load_feature_matrix(const std::string& path);

/// CSV with the canonical column-name header, one row per sample.
void write_feature_csv(const FeatureMatrix& features, std::ostream& os);

/// Digest of everything that determines a feature layout (bank + scatter
/// configuration and grid); models refuse nothing, but carry it for
/// provenance checks.
std::string scatter_config_digest(const BankConfig& bank, const ScatterConfig& config);

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::string train_images, train_labels;
  std::string test_images, test_labels;
  std::size_t train_size = 1000;
  std::size_t validation_size = 200;
  std::size_t test_size = 500;
  BankConfig bank;          // grid fields are overwritten from the data
  ScatterConfig scatter;
  std::vector<double> lambdas = {1e-4, 1e-2, 1.0};
  std::string out_dir = ".";
  int threads = 0;
};

struct ClassificationMetrics {
  double scatter_error = 1.0;
  double raw_error = 1.0;
  double scatter_lambda = 0.0;
  double raw_lambda = 0.0;
  double scatter_validation_error = 1.0;
  double raw_validation_error = 1.0;
  std::size_t feature_dim = 0;
  std::size_t train_size = 0, validation_size = 0, test_size = 0;
};

/// The classification experiment: seeded subset selection, scattering vs
/// raw-pixel features through the identical ridge classifier, lambda chosen
/// on the validation split. Writes features_train.skfm, features_test.skfm
/// and metrics.json under out_dir; all outputs are byte-deterministic for a
/// fixed config on one platform.
ClassificationMetrics run_classification_experiment(const ExperimentConfig& config);

}  // namespace scatterkit
