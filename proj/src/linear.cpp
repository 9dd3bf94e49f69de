#include "scatterkit/linear.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

LinearModel train_linear(const FeatureMatrix& features, const std::vector<int>& labels,
                         double lambda) {
  if (features.rows == 0 || features.cols == 0)
    throw InvalidInputError("train_linear: empty feature matrix");
  if (labels.size() != features.rows)
    throw InvalidInputError("train_linear: one label per row required");
  if (lambda < 0.0) throw InvalidInputError("train_linear: lambda must be nonnegative");

  int class_count = 0;
  for (int label : labels) {
    if (label < 0) throw InvalidInputError("train_linear: labels must be nonnegative");
    class_count = std::max(class_count, label + 1);
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(features.rows);
  const Eigen::Index dim = static_cast<Eigen::Index>(features.cols);
  Eigen::Map<const RowMajorMatrix> X(features.data.data(), rows, dim);

  // G = [X | 1]; the constant column carries the bias
  Eigen::MatrixXd G(rows, dim + 1);
  G.leftCols(dim) = X;
  G.col(dim).setOnes();

  Eigen::MatrixXd A = G.transpose() * G;
  A.diagonal().array() += lambda;

  Eigen::MatrixXd targets(rows, class_count);
  targets.setConstant(-1.0);
  for (Eigen::Index r = 0; r < rows; ++r) targets(r, labels[static_cast<std::size_t>(r)]) = 1.0;
  Eigen::MatrixXd rhs = G.transpose() * targets;

  Eigen::LDLT<Eigen::MatrixXd> solver(A);
  if (lambda == 0.0 && solver.info() != Eigen::Success)
    throw NumericError(
        "train_linear: normal equations are rank-deficient with lambda = 0; use lambda > 0");
  Eigen::MatrixXd W = solver.solve(rhs);

  // accuracy contract: every class system must actually be solved
  for (int c = 0; c < class_count; ++c) {
    const double residual = (A * W.col(c) - rhs.col(c)).norm();
    const double scale = rhs.col(c).norm();
    if (residual > 1e-8 * std::max(scale, 1e-300)) {
      if (lambda == 0.0)
        throw NumericError(
            "train_linear: normal equations are numerically singular (residual " +
            std::to_string(residual) + "); use lambda > 0");
      throw NumericError("train_linear: residual check failed: " + std::to_string(residual));
    }
  }

  LinearModel model;
  model.feature_dim = features.cols;
  model.class_count = class_count;
  model.lambda = lambda;
  model.feature_digest = features.feature_digest;
  model.weights.resize(static_cast<std::size_t>(class_count) * features.cols);
  model.bias.resize(class_count);
  for (int c = 0; c < class_count; ++c) {
    for (Eigen::Index d = 0; d < dim; ++d)
      model.weights[static_cast<std::size_t>(c) * features.cols + d] = W(d, c);
    model.bias[c] = W(dim, c);
  }
  return model;
}

std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features) {
  if (features.cols != model.feature_dim)
    throw InvalidInputError("predict: feature dimension does not match the model");
  std::vector<int> out(features.rows);
  for (std::size_t r = 0; r < features.rows; ++r) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < model.class_count; ++c) {
      double score = model.bias[c];
      const double* w = model.weights.data() + static_cast<std::size_t>(c) * model.feature_dim;
      const double* x = features.data.data() + r * features.cols;
      for (std::size_t d = 0; d < model.feature_dim; ++d) score += w[d] * x[d];
      if (score > best_score) {  // strict: ties keep the smallest class index
        best_score = score;
        best = c;
      }
    }
    out[r] = best;
  }
  return out;
}

double evaluate(const LinearModel& model, const FeatureMatrix& features,
                const std::vector<int>& labels) {
  if (features.rows == 0) throw InvalidInputError("evaluate: empty feature matrix");
  if (labels.size() != features.rows)
    throw InvalidInputError("evaluate: one label per row required");
  const std::vector<int> predictions = predict(model, features);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < features.rows; ++r)
    if (predictions[r] != labels[r]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(features.rows);
}

void save_model(const LinearModel& model, const std::string& path) {
  nlohmann::json j;
  j["format"] = "scatterkit-model-v1";
  j["feature_dim"] = model.feature_dim;
  j["class_count"] = model.class_count;
  j["lambda"] = model.lambda;
  j["feature_digest"] = model.feature_digest;
  j["bias"] = model.bias;
  j["weights"] = model.weights;
  std::ofstream os(path);
  if (!os) throw IoError("cannot open model file for writing: " + path);
  os << j.dump() << "\n";
}

LinearModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("cannot parse model JSON in " + path + ": " + e.what());
  }
  if (j.value("format", "") != "scatterkit-model-v1")
    throw FormatError("not a scatterkit model file: " + path);
  LinearModel model;
  model.feature_dim = j.at("feature_dim").get<std::size_t>();
  model.class_count = j.at("class_count").get<int>();
  model.lambda = j.at("lambda").get<double>();
  model.feature_digest = j.value("feature_digest", "");
  model.bias = j.at("bias").get<std::vector<double>>();
  model.weights = j.at("weights").get<std::vector<double>>();
  if (model.bias.size() != static_cast<std::size_t>(model.class_count) ||
      model.weights.size() != model.feature_dim * model.class_count)
    throw FormatError("model dimensions are inconsistent in " + path);
  return model;
}

}  // namespace scatterkit
