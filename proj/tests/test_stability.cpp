#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scatterkit/errors.hpp"
#include "scatterkit/signal.hpp"
#include "scatterkit/stability.hpp"
#include "scatterkit/synth.hpp"

using namespace scatterkit;

namespace {

double rel_l2_change(const Signal& a, const Signal& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("translate: identity, cyclic example, exact norm preservation") {
  Signal x = Signal::real_1d({1.0, 2.0, 3.0, 4.0});
  Signal same = translate(x, {0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(same[i] == x[i]);

  Signal shifted = translate(x, {1});
  CHECK(shifted[0] == Complex(4.0, 0.0));
  CHECK(shifted[1] == Complex(1.0, 0.0));
  CHECK(shifted[2] == Complex(2.0, 0.0));
  CHECK(shifted[3] == Complex(3.0, 0.0));

  // translation is an exact permutation of the samples
  Signal img = synth::white_noise_2d(8, 8, 3);
  Signal moved = translate(img, {3, -5});
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t xx = 0; xx < 8; ++xx)
      CHECK(moved.at(y, xx) == img.at((y + 8 - 3) % 8, (xx + 5) % 8));
  CHECK(l2_norm(moved) == doctest::Approx(l2_norm(img)).epsilon(1e-15));
  CHECK_THROWS_AS(translate(img, {1}), InvalidInputError);
}

TEST_CASE("warp: zero field is the exact identity") {
  Signal x = synth::texture_2d(16, 16, 3.0, 5);
  Deformation zero = Deformation::custom(
      2, 16, 16, {std::vector<double>(256, 0.0), std::vector<double>(256, 0.0)}, "zero");
  Signal out = warp(x, zero);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == x[i]);
}

TEST_CASE("warp: constant integer field equals translate on the grid") {
  Signal x = synth::texture_2d(16, 16, 3.0, 6);
  Deformation shift = Deformation::translation_2d(16, 16, 2.0, -3.0);
  Signal warped = warp(x, shift);
  Signal translated = translate(x, {2, -3});
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(warped[i] == translated[i]);
}

TEST_CASE("warp: a 1% dilation moves a smooth image a little but not much") {
  Signal x = synth::smooth_noise_2d(32, 32, 4.0, 7);
  Deformation dil = Deformation::dilation_2d(32, 32, 0.01);
  Signal warped = warp(x, dil);
  const double change = rel_l2_change(warped, x);
  CHECK(change > 0.0);
  CHECK(change <= 0.2);
}

TEST_CASE("warp approximately preserves the norm of smooth signals") {
  Signal x = synth::smooth_noise_2d(32, 32, 4.0, 8);
  Deformation g = Deformation::random_smooth_2d(32, 32, 0.02, 2.0, 99);
  CHECK(l2_norm(warp(x, g)) == doctest::Approx(l2_norm(x)).epsilon(0.05));
}

TEST_CASE("deformations with sup|grad g| >= 1 are rejected") {
  std::vector<double> steep(16, 0.0);
  steep[1] = 2.0;
  CHECK_THROWS_AS(Deformation::custom(1, 1, 16, {steep}, "fold"), InvalidInputError);
}

TEST_CASE("diffeo_norm: translations, zero field, dilation") {
  Deformation v = Deformation::translation_2d(32, 32, 3.0, 4.0);
  CHECK(v.sup_gradient() == 0.0);
  CHECK(diffeo_norm(v, 3) == doctest::Approx(std::pow(2.0, -3) * 5.0));

  Deformation zero = Deformation::custom(
      2, 8, 8, {std::vector<double>(64, 0.0), std::vector<double>(64, 0.0)}, "zero");
  CHECK(diffeo_norm(zero, 2) == 0.0);

  const double eps = 0.01;
  Deformation dil = Deformation::dilation_2d(32, 32, eps);
  const double expected = std::pow(2.0, -3) * eps * 16.0 * std::sqrt(2.0) + eps;
  CHECK(diffeo_norm(dil, 3) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("diffeo_norm is homogeneous in the field") {
  Deformation g = Deformation::random_smooth_2d(16, 16, 0.05, 2.0, 11);
  std::vector<std::vector<double>> scaled{g.component(0), g.component(1)};
  const double t = 3.5;
  for (auto& c : scaled)
    for (double& val : c) val *= t;
  Deformation tg = Deformation::custom(2, 16, 16, scaled, "scaled");
  CHECK(tg.sup_displacement() == doctest::Approx(t * g.sup_displacement()).epsilon(1e-12));
  CHECK(tg.sup_gradient() == doctest::Approx(t * g.sup_gradient()).epsilon(1e-12));
  CHECK(diffeo_norm(tg, 2) == doctest::Approx(t * diffeo_norm(g, 2)).epsilon(1e-12));
}

TEST_CASE("lipschitz_ratio: zero deformation gives zero for every feature map") {
  Signal x = synth::texture_2d(16, 16, 3.0, 21);
  Deformation zero = Deformation::custom(
      2, 16, 16, {std::vector<double>(256, 0.0), std::vector<double>(256, 0.0)}, "zero");
  for (const std::string name : {"raw", "fourier-modulus", "scatter-m1", "scatter-m2"}) {
    LipschitzResult r = lipschitz_ratio(name, x, zero, 2);
    CHECK(r.ratio == 0.0);
    CHECK(r.ratio_per_order == 0.0);
  }
}

TEST_CASE("lipschitz_ratio: integer translation barely moves scattering features") {
  const std::size_t n = 32;
  Signal x = synth::texture_2d(n, n, 4.0, 23);
  Deformation shift = Deformation::translation_2d(n, n, 1.0, 0.0);
  FeatureExtractor scatter2(FeatureMap::ScatterM2, 5, 2, n, n, 4);
  LipschitzResult r = lipschitz_ratio(scatter2, x, shift, 5);
  CHECK(r.ratio >= 0.0);
  CHECK(r.ratio < 1.0);
  CHECK(r.ratio_per_order == doctest::Approx(r.ratio / 2.0));
}

TEST_CASE("lipschitz_ratio: scattering is more dilation-stable than Fourier modulus") {
  const std::size_t n = 32;
  Signal x = synth::texture_2d(n, n, 6.0, 29);
  Deformation dil = Deformation::dilation_2d(n, n, 0.01);
  FeatureExtractor fourier(FeatureMap::FourierModulus, 3, 2, n, n);
  FeatureExtractor scatter2(FeatureMap::ScatterM2, 3, 2, n, n);
  const double r_fourier = lipschitz_ratio(fourier, x, dil, 3).ratio;
  const double r_scatter = lipschitz_ratio(scatter2, x, dil, 3).ratio;
  CHECK(r_scatter < r_fourier);
}

TEST_CASE("lipschitz_ratio: raw features on translated noise are the flakiest") {
  const std::size_t n = 16;
  Deformation shift = Deformation::translation_2d(n, n, 1.0, 0.0);
  FeatureExtractor raw(FeatureMap::Raw, 3, 2, n, n);
  FeatureExtractor scatter2(FeatureMap::ScatterM2, 3, 2, n, n, 4);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Signal x = synth::white_noise_2d(n, n, 300 + seed);
    const double r_raw = lipschitz_ratio(raw, x, shift, 3).ratio;
    const double r_scatter = lipschitz_ratio(scatter2, x, shift, 3).ratio;
    CHECK(r_raw > r_scatter);
  }
}

TEST_CASE("lipschitz_ratio rejects unknown feature maps") {
  Signal x = synth::texture_2d(8, 8, 2.0, 31);
  Deformation zero = Deformation::custom(
      2, 8, 8, {std::vector<double>(64, 0.0), std::vector<double>(64, 0.0)}, "zero");
  CHECK_THROWS_AS(lipschitz_ratio("sift", x, zero, 2), InvalidInputError);
}

TEST_CASE("invariance_profile: zero family, monotone shifts, raw vs scattering radius") {
  const std::size_t n = 32;
  FeatureExtractor scatter2(FeatureMap::ScatterM2, 5, 2, n, n, 4);
  FeatureExtractor raw(FeatureMap::Raw, 5, 2, n, n);

  Signal x = synth::texture_2d(n, n, 4.0, 41);
  std::vector<Deformation> zeros;
  for (int i = 0; i < 3; ++i)
    zeros.push_back(Deformation::custom(
        2, n, n, {std::vector<double>(n * n, 0.0), std::vector<double>(n * n, 0.0)}, "zero"));
  InvarianceProfile all_zero = invariance_profile(scatter2, x, zeros);
  for (const auto& row : all_zero.rows) CHECK(row.relative_change == 0.0);

  std::vector<Deformation> shifts;
  for (double v : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0})
    shifts.push_back(Deformation::translation_2d(n, n, 0.0, v));

  // median profile over several textures is nondecreasing in |g|
  std::vector<std::vector<double>> changes(shifts.size());
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Signal t = synth::texture_2d(n, n, 4.0, 600 + seed);
    InvarianceProfile p = invariance_profile(scatter2, t, shifts);
    for (std::size_t i = 0; i < p.rows.size(); ++i) changes[i].push_back(p.rows[i].relative_change);
  }
  std::vector<double> medians;
  for (auto& c : changes) {
    std::sort(c.begin(), c.end());
    medians.push_back(0.5 * (c[2] + c[3]));
  }
  for (std::size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] >= medians[i - 1] * 0.98);

  // raw features give up sooner than scattering
  InvarianceProfile ps = invariance_profile(scatter2, x, shifts, 0.25);
  InvarianceProfile pr = invariance_profile(raw, x, shifts, 0.25);
  CHECK(pr.effective_radius < ps.effective_radius);

  CHECK_THROWS_AS(invariance_profile(raw, x, {}), InvalidInputError);
}

TEST_CASE("stability_experiment: a zero deformation yields all-zero ratios") {
  StabilityConfig config;
  config.grid = 16;
  config.J = 2;
  config.K = 4;
  config.signal_count = 2;
  config.random_deformations = 0;
  config.dilation_eps = {};
  config.translation_magnitudes = {0.0};
  StabilityReport report = stability_experiment(config);
  REQUIRE(!report.rows.empty());
  for (const auto& row : report.rows) CHECK(row.ratio == 0.0);
}

TEST_CASE("stability_experiment: desk-scale run, aggregates and determinism") {
  StabilityConfig config;
  config.grid = 32;
  config.signal_count = 4;
  config.random_deformations = 5;
  config.dilation_eps = {0.01, 0.02};
  config.translation_magnitudes = {1.0};
  StabilityReport report = stability_experiment(config);

  const std::size_t expected_rows =
      (config.translation_magnitudes.size() + config.dilation_eps.size() +
       config.random_deformations) *
      config.signal_count * config.feature_maps.size();
  CHECK(report.rows.size() == expected_rows);
  for (const auto& row : report.rows) {
    CHECK(std::isfinite(row.ratio));
    CHECK(row.ratio >= 0.0);
  }

  // the paper's central qualitative claim at desk scale
  const auto& dil_scatter = report.aggregate("dilation", "scatter-m2");
  const auto& dil_fourier = report.aggregate("dilation", "fourier-modulus");
  CHECK(dil_scatter.median_ratio < dil_fourier.median_ratio);

  const auto& rnd = report.aggregate("random-smooth", "scatter-m2");
  CHECK(rnd.max_ratio / rnd.median_ratio <= 5.0);

  std::ostringstream csv_a, csv_b;
  report.write_csv(csv_a);
  StabilityReport rerun = stability_experiment(config);
  rerun.write_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(report.json_summary() == rerun.json_summary());

  std::istringstream csv(csv_a.str());
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "transform,family,feature_map,signal,gnorm,delta,xnorm,ratio,ratio_per_order");
}
