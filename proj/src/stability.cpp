#include "scatterkit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "parallel.hpp"
#include "scatterkit/errors.hpp"
#include "scatterkit/scattering.hpp"
#include "scatterkit/synth.hpp"

namespace scatterkit {
namespace {

std::size_t wrap(long i, std::size_t n) {
  long m = i % static_cast<long>(n);
  if (m < 0) m += static_cast<long>(n);
  return static_cast<std::size_t>(m);
}

// centered differences inside the grid, one-sided at the edges; the fields
// are not periodic, so wrapping the stencil would fabricate seam gradients
double derivative(const std::vector<double>& f, std::size_t stride, std::size_t count,
                  std::size_t base, std::size_t i) {
  auto at = [&](std::size_t idx) { return f[base + idx * stride]; };
  if (count == 1) return 0.0;
  if (i == 0) return at(1) - at(0);
  if (i == count - 1) return at(count - 1) - at(count - 2);
  return 0.5 * (at(i + 1) - at(i - 1));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double vec_l2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double vec_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

std::string format_eps(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

Deformation::Deformation(int dim, std::size_t h, std::size_t w,
                         std::vector<std::vector<double>> components, DeformKind kind,
                         std::string label)
    : dim_(dim), height_(h), width_(w), components_(std::move(components)), kind_(kind),
      label_(std::move(label)) {
  if (dim_ != 1 && dim_ != 2) throw InvalidInputError("deformation: dim must be 1 or 2");
  if (components_.size() != static_cast<std::size_t>(dim_))
    throw InvalidInputError("deformation: one field component per dimension required");
  for (const auto& c : components_) {
    if (c.size() != height_ * width_)
      throw InvalidInputError("deformation: field shape does not match the grid");
    for (double v : c)
      if (!std::isfinite(v)) throw InvalidInputError("deformation: field must be finite");
  }
  const double grad = sup_gradient();
  if (!(grad < 1.0))
    throw InvalidInputError("deformation: sup|grad g| must stay below 1 (got " +
                            std::to_string(grad) + ")");
}

Deformation Deformation::translation_1d(std::size_t n, double v) {
  return Deformation(1, 1, n, {std::vector<double>(n, v)}, DeformKind::Translation,
                     "translation-v" + format_eps(v));
}

Deformation Deformation::translation_2d(std::size_t height, std::size_t width, double vy,
                                        double vx) {
  return Deformation(2, height, width,
                     {std::vector<double>(height * width, vy),
                      std::vector<double>(height * width, vx)},
                     DeformKind::Translation,
                     "translation-v(" + format_eps(vy) + "," + format_eps(vx) + ")");
}

Deformation Deformation::dilation_1d(std::size_t n, double eps) {
  const double center = static_cast<double>(n) / 2.0;
  std::vector<double> g(n);
  for (std::size_t t = 0; t < n; ++t) g[t] = eps * (static_cast<double>(t) - center);
  return Deformation(1, 1, n, {std::move(g)}, DeformKind::Dilation,
                     "dilation-eps" + format_eps(eps));
}

Deformation Deformation::dilation_2d(std::size_t height, std::size_t width, double eps) {
  const double cy = static_cast<double>(height) / 2.0;
  const double cx = static_cast<double>(width) / 2.0;
  std::vector<double> gy(height * width), gx(height * width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      gy[y * width + x] = eps * (static_cast<double>(y) - cy);
      gx[y * width + x] = eps * (static_cast<double>(x) - cx);
    }
  }
  return Deformation(2, height, width, {std::move(gy), std::move(gx)}, DeformKind::Dilation,
                     "dilation-eps" + format_eps(eps));
}

Deformation Deformation::random_smooth_1d(std::size_t n, double target_grad, double cutoff_bins,
                                          std::uint64_t seed) {
  Signal noise = synth::smooth_noise_1d(n, cutoff_bins, seed);
  std::vector<double> g(n);
  for (std::size_t t = 0; t < n; ++t) g[t] = noise[t].real();
  Deformation tentative(1, 1, n, {g}, DeformKind::RandomSmooth, "tmp");
  const double grad = tentative.sup_gradient();
  const double scale = grad > 0.0 ? target_grad / grad : 0.0;
  for (double& v : g) v *= scale;
  return Deformation(1, 1, n, {std::move(g)}, DeformKind::RandomSmooth,
                     "random-smooth-seed" + std::to_string(seed));
}

Deformation Deformation::random_smooth_2d(std::size_t height, std::size_t width,
                                          double target_grad, double cutoff_bins,
                                          std::uint64_t seed) {
  std::vector<std::vector<double>> comps;
  for (int c = 0; c < 2; ++c) {
    Signal noise = synth::smooth_noise_2d(height, width, cutoff_bins, seed * 2 + c);
    std::vector<double> g(height * width);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = noise[i].real();
    comps.push_back(std::move(g));
  }
  Deformation tentative(2, height, width, comps, DeformKind::RandomSmooth, "tmp");
  const double grad = tentative.sup_gradient();
  const double scale = grad > 0.0 ? target_grad / grad : 0.0;
  for (auto& c : comps)
    for (double& v : c) v *= scale;
  return Deformation(2, height, width, std::move(comps), DeformKind::RandomSmooth,
                     "random-smooth-seed" + std::to_string(seed));
}

Deformation Deformation::custom(int dim, std::size_t height, std::size_t width,
                                std::vector<std::vector<double>> components, std::string label) {
  return Deformation(dim, height, width, std::move(components), DeformKind::Custom,
                     std::move(label));
}

double Deformation::sup_displacement() const {
  double sup = 0.0;
  for (std::size_t i = 0; i < height_ * width_; ++i) {
    double norm2 = 0.0;
    for (const auto& c : components_) norm2 += c[i] * c[i];
    sup = std::max(sup, norm2);
  }
  return std::sqrt(sup);
}

double Deformation::sup_gradient() const {
  double sup = 0.0;
  if (dim_ == 1) {
    const auto& g = components_[0];
    for (std::size_t t = 0; t < width_; ++t)
      sup = std::max(sup, std::abs(derivative(g, 1, width_, 0, t)));
    return sup;
  }
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) {
      // Jacobian [d g_c / d y, d g_c / d x] for c in {y, x}
      double m[2][2];
      for (int c = 0; c < 2; ++c) {
        m[c][0] = derivative(components_[c], width_, height_, x, y);
        m[c][1] = derivative(components_[c], 1, width_, y * width_, x);
      }
      const double t = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] +
                       m[1][1] * m[1][1];
      const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
      const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
      sup = std::max(sup, std::sqrt(0.5 * (t + disc)));
    }
  }
  return sup;
}

Signal translate(const Signal& x, const std::vector<long>& v) {
  if (x.empty()) throw InvalidInputError("translate: empty signal");
  if (v.size() != static_cast<std::size_t>(x.dim()))
    throw InvalidInputError("translate: one offset per dimension required");
  if (x.dim() == 1) return circular_shift(x, v[0]);
  return circular_shift(x, v[0], v[1]);
}

Signal warp(const Signal& x, const Deformation& g) {
  if (x.empty()) throw InvalidInputError("warp: empty signal");
  if (x.dim() != g.dim() || x.height() != g.height() || x.width() != g.width())
    throw InvalidInputError("warp: deformation grid does not match the signal");

  std::vector<Complex> out(x.size());
  if (x.dim() == 1) {
    const std::size_t n = x.size();
    const auto& gx = g.component(0);
    for (std::size_t t = 0; t < n; ++t) {
      const double pos = static_cast<double>(t) - gx[t];
      const double fl = std::floor(pos);
      const double frac = pos - fl;
      const std::size_t i0 = wrap(static_cast<long>(fl), n);
      const std::size_t i1 = wrap(static_cast<long>(fl) + 1, n);
      out[t] = x[i0] * (1.0 - frac) + x[i1] * frac;
    }
    return Signal(std::move(out), x.step());
  }

  const std::size_t h = x.height(), w = x.width();
  const auto& gy = g.component(0);
  const auto& gx = g.component(1);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t xx = 0; xx < w; ++xx) {
      const std::size_t i = y * w + xx;
      const double py = static_cast<double>(y) - gy[i];
      const double px = static_cast<double>(xx) - gx[i];
      const double fy = std::floor(py), fx = std::floor(px);
      const double ay = py - fy, ax = px - fx;
      const std::size_t y0 = wrap(static_cast<long>(fy), h), y1 = wrap(static_cast<long>(fy) + 1, h);
      const std::size_t x0 = wrap(static_cast<long>(fx), w), x1 = wrap(static_cast<long>(fx) + 1, w);
      out[i] = x.at(y0, x0) * ((1.0 - ay) * (1.0 - ax)) + x.at(y0, x1) * ((1.0 - ay) * ax) +
               x.at(y1, x0) * (ay * (1.0 - ax)) + x.at(y1, x1) * (ay * ax);
    }
  }
  return Signal(std::move(out), h, w, x.step());
}

double diffeo_norm(const Deformation& g, int J) {
  return std::pow(2.0, -J) * g.sup_displacement() + g.sup_gradient();
}

FeatureMap feature_map_from_name(const std::string& name) {
  if (name == "raw") return FeatureMap::Raw;
  if (name == "fourier-modulus") return FeatureMap::FourierModulus;
  if (name == "scatter-m1") return FeatureMap::ScatterM1;
  if (name == "scatter-m2") return FeatureMap::ScatterM2;
  throw InvalidInputError("unknown feature map: " + name);
}

std::string feature_map_name(FeatureMap map) {
  switch (map) {
    case FeatureMap::Raw: return "raw";
    case FeatureMap::FourierModulus: return "fourier-modulus";
    case FeatureMap::ScatterM1: return "scatter-m1";
    case FeatureMap::ScatterM2: return "scatter-m2";
  }
  return "?";
}

FeatureExtractor::FeatureExtractor(FeatureMap map, int J, int dim, std::size_t height,
                                   std::size_t width, int K)
    : map_(map), J_(J) {
  if (map_ == FeatureMap::ScatterM1 || map_ == FeatureMap::ScatterM2) {
    BankConfig config;
    config.J = J;
    config.K = K;
    config.dim = dim;
    config.height = height;
    config.width = width;
    bank_ = std::make_shared<FilterBank>(build_bank(config));
  }
}

int FeatureExtractor::order() const {
  switch (map_) {
    case FeatureMap::ScatterM2: return 2;
    default: return 1;
  }
}

std::vector<double> FeatureExtractor::operator()(const Signal& x) const {
  switch (map_) {
    case FeatureMap::Raw: {
      std::vector<double> out;
      out.reserve(2 * x.size());
      for (const Complex& v : x.values()) {
        out.push_back(v.real());
        out.push_back(v.imag());
      }
      return out;
    }
    case FeatureMap::FourierModulus: {
      // scaled so the feature norm matches the signal norm (Parseval)
      Spectrum X = dft_forward(x);
      const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
      std::vector<double> out(X.size());
      for (std::size_t i = 0; i < X.size(); ++i) out[i] = std::abs(X.values[i]) * scale;
      return out;
    }
    case FeatureMap::ScatterM1:
    case FeatureMap::ScatterM2: {
      ScatterConfig config;
      config.max_order = std::min(order(), bank_->config.J);
      ScatteringCoefficients coeffs = scatter(x, config, *bank_);
      std::vector<double> out = feature_vector(coeffs);
      const double rescale = coeffs.norm_rescale();
      for (double& v : out) v *= rescale;
      return out;
    }
  }
  return {};
}

LipschitzResult lipschitz_ratio(const FeatureExtractor& features, const Signal& x,
                                const Deformation& g, int J) {
  const std::vector<double> base = features(x);
  const std::vector<double> warped = features(warp(x, g));
  const double delta = vec_dist(warped, base);

  LipschitzResult result;
  if (delta == 0.0) return result;  // zero deformation: the numerator vanishes exactly
  const double denom = diffeo_norm(g, J) * l2_norm(x);
  if (denom == 0.0) throw InvalidInputError("lipschitz_ratio: zero signal");
  result.ratio = delta / denom;
  result.ratio_per_order = result.ratio / features.order();
  return result;
}

LipschitzResult lipschitz_ratio(const std::string& feature_map, const Signal& x,
                                const Deformation& g, int J) {
  FeatureExtractor features(feature_map_from_name(feature_map), J, x.dim(), x.height(),
                            x.width());
  return lipschitz_ratio(features, x, g, J);
}

InvarianceProfile invariance_profile(const FeatureExtractor& features, const Signal& x,
                                     const std::vector<Deformation>& family, double threshold) {
  if (family.empty()) throw InvalidInputError("invariance_profile: empty deformation family");
  // J only enters through |g| labeling here; the default J of the extractor's
  // bank is the relevant scale, so use sup terms directly via diffeo_norm.
  InvarianceProfile profile;
  profile.threshold = threshold;
  const std::vector<double> base = features(x);
  const double base_norm = vec_l2(base);
  if (base_norm == 0.0) throw InvalidInputError("invariance_profile: zero feature vector");

  for (const Deformation& g : family) {
    InvariancePoint pt;
    pt.gnorm = g.sup_displacement() + g.sup_gradient();
    const std::vector<double> moved = features(warp(x, g));
    pt.relative_change = vec_dist(moved, base) / base_norm;
    profile.rows.push_back(pt);
  }
  std::sort(profile.rows.begin(), profile.rows.end(),
            [](const InvariancePoint& a, const InvariancePoint& b) { return a.gnorm < b.gnorm; });
  profile.effective_radius = 0.0;
  for (const auto& row : profile.rows)
    if (row.relative_change < threshold) profile.effective_radius = std::max(profile.effective_radius, row.gnorm);
  return profile;
}

const StabilityAggregate& StabilityReport::aggregate(const std::string& family,
                                                     const std::string& feature_map) const {
  for (const auto& agg : aggregates)
    if (agg.family == family && agg.feature_map == feature_map) return agg;
  throw InvalidInputError("no aggregate for " + family + "/" + feature_map);
}

void StabilityReport::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "transform,family,feature_map,signal,gnorm,delta,xnorm,ratio,ratio_per_order\n";
  for (const auto& row : rows) {
    os << row.transform << ',' << row.family << ',' << row.feature_map << ','
       << row.signal_index << ',' << row.gnorm << ',' << row.delta << ',' << row.xnorm << ','
       << row.ratio << ',' << row.ratio_per_order << "\n";
  }
}

std::string StabilityReport::json_summary() const {
  nlohmann::json j;
  j["config"]["seed"] = config.seed;
  j["config"]["grid"] = config.grid;
  j["config"]["J"] = config.J;
  j["config"]["K"] = config.K;
  j["config"]["max_order"] = config.max_order;
  j["config"]["signal_count"] = config.signal_count;
  j["config"]["texture_knee"] = config.texture_knee;
  j["config"]["random_deformations"] = config.random_deformations;
  j["config"]["min_grad"] = config.min_grad;
  j["config"]["max_grad"] = config.max_grad;
  j["config"]["deformation_cutoff"] = config.deformation_cutoff;
  j["config"]["dilation_eps"] = config.dilation_eps;
  j["config"]["translation_magnitudes"] = config.translation_magnitudes;
  {
    std::vector<std::string> maps;
    for (FeatureMap m : config.feature_maps) maps.push_back(feature_map_name(m));
    j["config"]["feature_maps"] = maps;
  }
  j["rows"] = rows.size();
  j["aggregates"] = nlohmann::json::array();
  for (const auto& agg : aggregates) {
    j["aggregates"].push_back({{"family", agg.family},
                               {"feature_map", agg.feature_map},
                               {"median_ratio", agg.median_ratio},
                               {"max_ratio", agg.max_ratio}});
  }
  return j.dump(2);
}

StabilityReport stability_experiment(const StabilityConfig& config) {
  if (config.signal_count == 0) throw InvalidInputError("stability_experiment: no signals");
  if (config.feature_maps.empty())
    throw InvalidInputError("stability_experiment: no feature maps");

  StabilityReport report;
  report.config = config;

  // signals
  std::vector<Signal> signals;
  for (std::size_t i = 0; i < config.signal_count; ++i)
    signals.push_back(
        synth::texture_2d(config.grid, config.grid, config.texture_knee,
                          config.seed * 1000003ULL + i));

  // deformation families
  std::vector<Deformation> deformations;
  std::vector<std::string> families;
  for (double v : config.translation_magnitudes) {
    deformations.push_back(Deformation::translation_2d(config.grid, config.grid, v, 0.0));
    families.push_back("translation");
  }
  for (double eps : config.dilation_eps) {
    deformations.push_back(Deformation::dilation_2d(config.grid, config.grid, eps));
    families.push_back("dilation");
  }
  for (std::size_t r = 0; r < config.random_deformations; ++r) {
    const double target =
        config.random_deformations > 1
            ? config.min_grad + (config.max_grad - config.min_grad) *
                                    static_cast<double>(r) /
                                    static_cast<double>(config.random_deformations - 1)
            : config.max_grad;
    deformations.push_back(Deformation::random_smooth_2d(
        config.grid, config.grid, target, config.deformation_cutoff,
        config.seed * 7919ULL + r));
    families.push_back("random-smooth");
  }

  // shared extractors and base features
  std::vector<FeatureExtractor> extractors;
  for (FeatureMap m : config.feature_maps)
    extractors.emplace_back(m, config.J, 2, config.grid, config.grid, config.K);

  std::vector<std::vector<std::vector<double>>> base(config.feature_maps.size());
  for (std::size_t m = 0; m < extractors.size(); ++m) {
    base[m].resize(signals.size());
    for (std::size_t s = 0; s < signals.size(); ++s) base[m][s] = extractors[m](signals[s]);
  }

  const std::size_t pair_count = deformations.size() * signals.size();
  report.rows.resize(pair_count * extractors.size());

  detail::parallel_for(pair_count, detail::resolve_thread_count(config.threads),
                       [&](std::size_t pair) {
    const std::size_t d = pair / signals.size();
    const std::size_t s = pair % signals.size();
    Signal warped = warp(signals[s], deformations[d]);
    const double gnorm = diffeo_norm(deformations[d], config.J);
    const double xnorm = l2_norm(signals[s]);
    for (std::size_t m = 0; m < extractors.size(); ++m) {
      const std::vector<double> moved = extractors[m](warped);
      StabilityRow row;
      row.transform = deformations[d].label();
      row.family = families[d];
      row.feature_map = feature_map_name(config.feature_maps[m]);
      row.signal_index = s;
      row.gnorm = gnorm;
      row.delta = vec_dist(moved, base[m][s]);
      row.xnorm = xnorm;
      row.ratio = row.delta == 0.0 ? 0.0 : row.delta / (gnorm * xnorm);
      row.ratio_per_order = row.ratio / extractors[m].order();
      report.rows[pair * extractors.size() + m] = std::move(row);
    }
  });

  // aggregates per (family, feature map)
  for (const std::string family : {"translation", "dilation", "random-smooth"}) {
    for (std::size_t m = 0; m < config.feature_maps.size(); ++m) {
      const std::string map_name = feature_map_name(config.feature_maps[m]);
      std::vector<double> ratios;
      for (const auto& row : report.rows)
        if (row.family == family && row.feature_map == map_name) ratios.push_back(row.ratio);
      if (ratios.empty()) continue;
      StabilityAggregate agg;
      agg.family = family;
      agg.feature_map = map_name;
      agg.median_ratio = median_of(ratios);
      agg.max_ratio = *std::max_element(ratios.begin(), ratios.end());
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

}  // namespace scatterkit
