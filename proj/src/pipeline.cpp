#include "scatterkit/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "binary_io.hpp"
#include "parallel.hpp"
#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

std::uint64_t fnv1a_append(std::uint64_t hash, const void* data, std::size_t size) {
  const unsigned char* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

template <typename T>
std::uint64_t fnv1a_value(std::uint64_t hash, const T& value) {
  return fnv1a_append(hash, &value, sizeof(value));
}

}  // namespace

std::string scatter_config_digest(const BankConfig& bank, const ScatterConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  h = fnv1a_value(h, bank.J);
  h = fnv1a_value(h, bank.K);
  h = fnv1a_value(h, bank.dim);
  h = fnv1a_value(h, bank.height);
  h = fnv1a_value(h, bank.width);
  h = fnv1a_value(h, bank.xi);
  h = fnv1a_value(h, bank.sigma);
  h = fnv1a_value(h, bank.slant);
  h = fnv1a_value(h, bank.normalization);
  h = fnv1a_value(h, config.max_order);
  h = fnv1a_value(h, config.oversampling);
  h = fnv1a_value(h, config.rho);
  h = fnv1a_value(h, config.all_paths);
  h = fnv1a_value(h, config.internal_subsampling);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

FeatureMatrix extract_features(const LabeledDataset& dataset, const ScatterConfig& config,
                               const FilterBank& bank, int threads) {
  FeatureMatrix out;
  out.feature_digest = scatter_config_digest(bank.config, config);
  if (dataset.size() == 0) return out;

  for (const Signal& img : dataset.images) {
    if (img.dim() != bank.config.dim || img.height() != bank.config.height ||
        img.width() != bank.config.width)
      throw InvalidInputError("extract_features: sample grid does not match the bank");
  }

  // one scatter to fix the layout
  ScatteringCoefficients first = scatter(dataset.images[0], config, bank);
  const std::vector<double> row0 = feature_vector(first);
  out.rows = dataset.size();
  out.cols = row0.size();
  out.labels = dataset.labels;
  out.column_names = feature_column_names(first);
  out.data.assign(out.rows * out.cols, 0.0);
  std::copy(row0.begin(), row0.end(), out.data.begin());

  detail::parallel_for(dataset.size() - 1, detail::resolve_thread_count(threads),
                       [&](std::size_t i) {
    const std::size_t sample = i + 1;
    const std::vector<double> row =
        feature_vector(scatter(dataset.images[sample], config, bank));
    if (row.size() != out.cols)
      throw NumericError("extract_features: inconsistent feature length");
    std::copy(row.begin(), row.end(), out.data.begin() + sample * out.cols);
  });
  return out;
}

FeatureMatrix flatten_pixels(const LabeledDataset& dataset) {
  FeatureMatrix out;
  out.feature_digest = "raw-pixels";
  if (dataset.size() == 0) return out;
  out.rows = dataset.size();
  out.cols = dataset.images[0].size();
  out.labels = dataset.labels;
  out.data.reserve(out.rows * out.cols);
  for (const Signal& img : dataset.images) {
    if (img.size() != out.cols)
      throw InvalidInputError("flatten_pixels: samples must share one grid");
    for (const Complex& v : img.values()) out.data.push_back(v.real());
  }
  out.column_names.reserve(out.cols);
  for (std::size_t c = 0; c < out.cols; ++c)
    out.column_names.push_back("px" + std::to_string(c));
  return out;
}

void save_feature_matrix(const FeatureMatrix& features, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open feature file for writing: " + path);
  os.write("SKFM", 4);
  detail::write_u32(os, 1);
  detail::write_u32(os, static_cast<std::uint32_t>(features.rows));
  detail::write_u32(os, static_cast<std::uint32_t>(features.cols));
  detail::write_u32(os, static_cast<std::uint32_t>(features.labels.size()));
  detail::write_u32(os, static_cast<std::uint32_t>(features.feature_digest.size()));
  os.write(features.feature_digest.data(),
           static_cast<std::streamsize>(features.feature_digest.size()));
  for (int label : features.labels) detail::write_u32(os, static_cast<std::uint32_t>(label));
  for (double v : features.data) detail::write_f64(os, v);
  if (!os) throw IoError("failed writing feature file: " + path);
}

FeatureMatrix load_feature_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open feature file: " + path);
  char magic[4];
  if (!is.read(magic, 4)) throw IoError("truncated feature file: " + path);
  if (std::string(magic, 4) != "SKFM") {
    std::ostringstream msg;
    msg << "bad feature-matrix magic in " << path << ": bytes";
    for (int i = 0; i < 4; ++i)
      msg << " 0x" << std::hex << (static_cast<unsigned>(magic[i]) & 0xff);
    throw FormatError(msg.str());
  }
  if (detail::read_u32(is, "version") != 1)
    throw FormatError("unsupported feature-matrix version in " + path);
  FeatureMatrix out;
  out.rows = detail::read_u32(is, "rows");
  out.cols = detail::read_u32(is, "cols");
  const std::uint32_t label_count = detail::read_u32(is, "label count");
  const std::uint32_t digest_len = detail::read_u32(is, "digest length");
  out.feature_digest.resize(digest_len);
  if (digest_len > 0 &&
      !is.read(out.feature_digest.data(), static_cast<std::streamsize>(digest_len)))
    throw IoError("truncated feature digest in " + path);
  out.labels.resize(label_count);
  for (auto& label : out.labels) label = static_cast<int>(detail::read_u32(is, "label"));
  out.data.resize(out.rows * out.cols);
  for (double& v : out.data) v = detail::read_f64(is, "feature value");
  return out;
}

void write_feature_csv(const FeatureMatrix& features, std::ostream& os) {
  os.precision(17);
  for (std::size_t c = 0; c < features.cols; ++c) {
    os << (c ? "," : "");
    os << (c < features.column_names.size() ? features.column_names[c]
                                            : "f" + std::to_string(c));
  }
  os << "\n";
  for (std::size_t r = 0; r < features.rows; ++r) {
    for (std::size_t c = 0; c < features.cols; ++c)
      os << (c ? "," : "") << features.at(r, c);
    os << "\n";
  }
}

namespace {

struct TunedModel {
  LinearModel model;
  double lambda = 0.0;
  double validation_error = 1.0;
};

// train at every lambda, keep the best validation error (first wins ties)
TunedModel tune_ridge(const FeatureMatrix& train, const FeatureMatrix& validation,
                      const std::vector<double>& lambdas) {
  TunedModel best;
  bool have = false;
  for (double lambda : lambdas) {
    LinearModel model = train_linear(train, train.labels, lambda);
    const double err = evaluate(model, validation, validation.labels);
    if (!have || err < best.validation_error) {
      best.model = std::move(model);
      best.lambda = lambda;
      best.validation_error = err;
      have = true;
    }
  }
  return best;
}

}  // namespace

ClassificationMetrics run_classification_experiment(const ExperimentConfig& config) {
  if (config.lambdas.empty())
    throw InvalidInputError("experiment: at least one ridge lambda required");

  LabeledDataset train_all = load_idx(config.train_images, config.train_labels);
  LabeledDataset test_all = load_idx(config.test_images, config.test_labels);
  if (train_all.size() < config.train_size + config.validation_size)
    throw InvalidInputError("experiment: train file smaller than train + validation sizes");
  if (test_all.size() < config.test_size)
    throw InvalidInputError("experiment: test file smaller than the requested test size");

  // seeded subset selection
  std::mt19937_64 gen(config.seed);
  std::vector<std::size_t> train_idx(train_all.size());
  std::iota(train_idx.begin(), train_idx.end(), 0);
  std::shuffle(train_idx.begin(), train_idx.end(), gen);
  std::vector<std::size_t> test_idx(test_all.size());
  std::iota(test_idx.begin(), test_idx.end(), 0);
  std::shuffle(test_idx.begin(), test_idx.end(), gen);

  LabeledDataset train = subset(
      train_all, {train_idx.begin(), train_idx.begin() + static_cast<long>(config.train_size)});
  LabeledDataset validation = subset(
      train_all,
      {train_idx.begin() + static_cast<long>(config.train_size),
       train_idx.begin() + static_cast<long>(config.train_size + config.validation_size)});
  LabeledDataset test = subset(
      test_all, {test_idx.begin(), test_idx.begin() + static_cast<long>(config.test_size)});

  BankConfig bank_config = config.bank;
  bank_config.dim = 2;
  bank_config.height = train.images[0].height();
  bank_config.width = train.images[0].width();
  FilterBank bank = build_bank(bank_config);

  FeatureMatrix train_features = extract_features(train, config.scatter, bank, config.threads);
  FeatureMatrix val_features = extract_features(validation, config.scatter, bank, config.threads);
  FeatureMatrix test_features = extract_features(test, config.scatter, bank, config.threads);

  FeatureMatrix train_raw = flatten_pixels(train);
  FeatureMatrix val_raw = flatten_pixels(validation);
  FeatureMatrix test_raw = flatten_pixels(test);

  TunedModel scatter_model = tune_ridge(train_features, val_features, config.lambdas);
  TunedModel raw_model = tune_ridge(train_raw, val_raw, config.lambdas);

  ClassificationMetrics metrics;
  metrics.scatter_error = evaluate(scatter_model.model, test_features, test_features.labels);
  metrics.raw_error = evaluate(raw_model.model, test_raw, test_raw.labels);
  metrics.scatter_lambda = scatter_model.lambda;
  metrics.raw_lambda = raw_model.lambda;
  metrics.scatter_validation_error = scatter_model.validation_error;
  metrics.raw_validation_error = raw_model.validation_error;
  metrics.feature_dim = train_features.cols;
  metrics.train_size = config.train_size;
  metrics.validation_size = config.validation_size;
  metrics.test_size = config.test_size;

  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path out(config.out_dir);
  save_feature_matrix(train_features, (out / "features_train.skfm").string());
  save_feature_matrix(test_features, (out / "features_test.skfm").string());

  nlohmann::json j;
  j["config"]["seed"] = config.seed;
  j["config"]["train_size"] = config.train_size;
  j["config"]["validation_size"] = config.validation_size;
  j["config"]["test_size"] = config.test_size;
  j["config"]["lambdas"] = config.lambdas;
  j["config"]["bank"]["J"] = bank_config.J;
  j["config"]["bank"]["K"] = bank_config.K;
  j["config"]["bank"]["height"] = bank_config.height;
  j["config"]["bank"]["width"] = bank_config.width;
  j["config"]["bank"]["xi"] = bank_config.xi;
  j["config"]["bank"]["sigma"] = bank_config.sigma;
  j["config"]["bank"]["slant"] = bank_config.slant;
  j["config"]["scatter"]["max_order"] = config.scatter.max_order;
  j["config"]["scatter"]["oversampling"] = config.scatter.oversampling;
  j["config"]["train_images_digest"] = train_all.images_digest;
  j["config"]["test_images_digest"] = test_all.images_digest;
  j["feature_dim"] = metrics.feature_dim;
  j["feature_digest"] = train_features.feature_digest;
  j["scatter"]["test_error"] = metrics.scatter_error;
  j["scatter"]["validation_error"] = metrics.scatter_validation_error;
  j["scatter"]["lambda"] = metrics.scatter_lambda;
  j["raw"]["test_error"] = metrics.raw_error;
  j["raw"]["validation_error"] = metrics.raw_validation_error;
  j["raw"]["lambda"] = metrics.raw_lambda;

  std::ofstream os(out / "metrics.json");
  if (!os) throw IoError("cannot write metrics.json under " + config.out_dir);
  os << j.dump(2) << "\n";
  return metrics;
}

}  // namespace scatterkit
