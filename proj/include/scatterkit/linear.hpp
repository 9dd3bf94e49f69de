#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace scatterkit {

/// Dense row-major feature matrix plus the labels that travel with it.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows x cols, row-major
  std::vector<int> labels;   // one per row; may be empty for unlabeled data
  std::vector<std::string> column_names;
  std::string feature_digest;  // digest of the configuration that produced it

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// One-vs-rest ridge classifier: per class c the weights solve
/// (G^T G + lambda I) w_c = G^T y_c with +-1 targets, where G is the feature
/// matrix with an appended constant column (the bias).
struct LinearModel {
  std::size_t feature_dim = 0;
  int class_count = 0;
  std::vector<double> weights;  // class_count x feature_dim, row-major
  std::vector<double> bias;     // class_count
  double lambda = 0.0;
  std::string feature_digest;
};

/// Solves the ridge systems by a dense factorization and verifies the
/// residual of every class system to 1e-8 relative; a failed check raises
/// NumericError (advising lambda > 0 when the system was unregularized).
LinearModel train_linear(const FeatureMatrix& features, const std::vector<int>& labels,
                         double lambda);

/// argmax_c <x, w_c> + b_c, ties broken by the smallest class index.
std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features);

/// Empirical 0-1 loss.
double evaluate(const LinearModel& model, const FeatureMatrix& features,
                const std::vector<int>& labels);

void save_model(const LinearModel& model, const std::string& path);  // JSON
LinearModel load_model(const std::string& path);

}  // namespace scatterkit
