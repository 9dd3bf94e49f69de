#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scatterkit/filterbank.hpp"
#include "scatterkit/signal.hpp"

namespace scatterkit {

enum class DeformKind { Translation, Dilation, RandomSmooth, Custom };

/// A displacement vector field g(u) on a signal grid, in units of samples.
/// Warping a signal reads x at u - g(u). Construction rejects fields whose
/// maximal local stretch sup|grad g| reaches 1 (the warp would fold).
class Deformation {
public:
  static Deformation translation_1d(std::size_t n, double v);
  static Deformation translation_2d(std::size_t height, std::size_t width, double vy, double vx);
  /// g(u) = eps * (u - center), centered on the grid midpoint.
  static Deformation dilation_1d(std::size_t n, double eps);
  static Deformation dilation_2d(std::size_t height, std::size_t width, double eps);
  /// Low-pass-filtered Gaussian field rescaled to the target sup|grad g|.
  static Deformation random_smooth_1d(std::size_t n, double target_grad, double cutoff_bins,
                                      std::uint64_t seed);
  static Deformation random_smooth_2d(std::size_t height, std::size_t width, double target_grad,
                                      double cutoff_bins, std::uint64_t seed);
  /// Arbitrary field; components is {gx} in 1D, {gy, gx} in 2D (row-major).
  static Deformation custom(int dim, std::size_t height, std::size_t width,
                            std::vector<std::vector<double>> components,
                            std::string label = "custom");

  int dim() const { return dim_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  DeformKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const std::vector<double>& component(int c) const { return components_[c]; }

  /// max over the grid of the Euclidean displacement norm
  double sup_displacement() const;
  /// max over the grid of the Jacobian operator 2-norm; centered differences
  /// inside the grid, one-sided at the edges (the field is not periodic)
  double sup_gradient() const;

private:
  Deformation(int dim, std::size_t h, std::size_t w, std::vector<std::vector<double>> components,
              DeformKind kind, std::string label);

  int dim_ = 1;
  std::size_t height_ = 1, width_ = 0;
  std::vector<std::vector<double>> components_;
  DeformKind kind_ = DeformKind::Custom;
  std::string label_;
};

/// Exact circular integer translation: out(u) = x(u - v). v holds one entry
/// per dimension ({vy, vx} in 2D).
Signal translate(const Signal& x, const std::vector<long>& v);

/// Warp by a deformation field: out(u) = x(u - g(u)) with circular
/// linear/bilinear interpolation.
Signal warp(const Signal& x, const Deformation& g);

/// The deformation size 2^{-J} sup|g| + sup|grad g| that the stability bounds
/// are stated against.
double diffeo_norm(const Deformation& g, int J);

enum class FeatureMap { Raw, FourierModulus, ScatterM1, ScatterM2 };

FeatureMap feature_map_from_name(const std::string& name);  // raw | fourier-modulus | scatter-m1 | scatter-m2
std::string feature_map_name(FeatureMap map);

/// Evaluates one feature map at a fixed grid and J, caching the filter bank
/// for the scattering maps. Returned vectors carry the subsampling rescale so
/// feature-space norms approximate continuous L2 norms.
class FeatureExtractor {
public:
  FeatureExtractor(FeatureMap map, int J, int dim, std::size_t height, std::size_t width,
                   int K = 8);
  std::vector<double> operator()(const Signal& x) const;
  FeatureMap map() const { return map_; }
  int order() const;  // scattering order m; 1 for raw and fourier-modulus

private:
  FeatureMap map_;
  int J_;
  std::shared_ptr<const FilterBank> bank_;  // null for raw / fourier-modulus
};

struct LipschitzResult {
  double ratio = 0.0;            // |Phi(g.x) - Phi(x)| / (|g| |x|)
  double ratio_per_order = 0.0;  // ratio / m for scattering maps, else == ratio
};

LipschitzResult lipschitz_ratio(const FeatureExtractor& features, const Signal& x,
                                const Deformation& g, int J);
LipschitzResult lipschitz_ratio(const std::string& feature_map, const Signal& x,
                                const Deformation& g, int J);

struct InvariancePoint {
  double gnorm = 0.0;
  double relative_change = 0.0;
};

struct InvarianceProfile {
  std::vector<InvariancePoint> rows;  // sorted by gnorm
  double threshold = 0.05;
  double effective_radius = 0.0;  // largest |g| whose relative change stays below threshold
};

InvarianceProfile invariance_profile(const FeatureExtractor& features, const Signal& x,
                                     const std::vector<Deformation>& family,
                                     double threshold = 0.05);

struct StabilityConfig {
  std::uint64_t seed = 1;
  std::size_t grid = 32;
  int J = 3;
  int K = 8;
  int max_order = 2;
  std::size_t signal_count = 10;
  double texture_knee = 4.0;
  std::size_t random_deformations = 20;
  double min_grad = 0.005;
  double max_grad = 0.02;
  double deformation_cutoff = 2.0;   // spectral cutoff of the random fields
  std::vector<double> dilation_eps = {0.005, 0.01, 0.015, 0.02};
  std::vector<double> translation_magnitudes = {1.0, 2.0};
  std::vector<FeatureMap> feature_maps = {FeatureMap::FourierModulus, FeatureMap::ScatterM2};
  int threads = 0;  // 0: SCATTERKIT_THREADS / hardware
};

struct StabilityRow {
  std::string transform;  // e.g. "random-smooth-03", "dilation-eps0.0100"
  std::string family;     // translation | dilation | random-smooth
  std::string feature_map;
  std::size_t signal_index = 0;
  double gnorm = 0.0;
  double delta = 0.0;  // |Phi(g.x) - Phi(x)|
  double xnorm = 0.0;
  double ratio = 0.0;
  double ratio_per_order = 0.0;
};

struct StabilityAggregate {
  std::string family;
  std::string feature_map;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
};

struct StabilityReport {
  StabilityConfig config;
  std::vector<StabilityRow> rows;
  std::vector<StabilityAggregate> aggregates;

  const StabilityAggregate& aggregate(const std::string& family,
                                      const std::string& feature_map) const;
  void write_csv(std::ostream& os) const;
  std::string json_summary() const;
};

/// Runs the full deformation-stability experiment: every configured feature
/// map against every (signal, deformation) pair, with per-family aggregates.
/// Deterministic for a fixed seed; pairs are evaluated in parallel.
StabilityReport stability_experiment(const StabilityConfig& config);

}  // namespace scatterkit
