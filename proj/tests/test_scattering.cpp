#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scatterkit/errors.hpp"
#include "scatterkit/scattering.hpp"
#include "scatterkit/signal.hpp"
#include "scatterkit/synth.hpp"

using namespace scatterkit;

namespace {

double rel_feature_dist(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

double feature_l2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

FilterBank default_bank_16(int J = 2, int K = 2) {
  BankConfig c;
  c.J = J;
  c.K = K;
  c.height = c.width = 16;
  return build_bank(c);
}

}  // namespace

TEST_CASE("path_enumerate: smallest nondegenerate case and order zero") {
  auto paths = path_enumerate(1, 1, 1);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].order() == 0);
  CHECK(paths[0].name() == "m0");
  CHECK(paths[1].lambdas == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(paths[1].name() == "m1_j0k1");

  auto only_root = path_enumerate(4, 8, 0);
  CHECK(only_root.size() == 1);
  CHECK(only_root[0].order() == 0);
}

TEST_CASE("path_enumerate: counts match the closed form and a brute-force recount") {
  const int J = 3, K = 8;
  auto paths = path_enumerate(J, K, 2);
  CHECK(paths.size() == 217);

  // closed form: sum over q of C(J, q) * K^q
  auto choose = [](int n, int r) {
    long long acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
  };
  long long expected = 0;
  long long kpow = 1;
  for (int q = 0; q <= 2; ++q) {
    expected += choose(J, q) * kpow;
    kpow *= K;
  }
  CHECK(static_cast<long long>(paths.size()) == expected);

  // brute-force recount of the order-2 layer
  int order2 = 0;
  for (int j1 = 0; j1 < J; ++j1)
    for (int j2 = j1 + 1; j2 < J; ++j2) order2 += K * K;
  CHECK(order2 == 192);

  // canonical order and the frequency-decreasing constraint
  for (std::size_t i = 1; i < paths.size(); ++i) CHECK(canonical_less(paths[i - 1], paths[i]));
  for (const auto& p : paths)
    for (int i = 1; i < p.order(); ++i) CHECK(p.lambdas[i - 1].first < p.lambdas[i].first);
}

TEST_CASE("path_enumerate rejects max order above J") {
  CHECK_THROWS_AS(path_enumerate(2, 4, 3), InvalidInputError);
}

TEST_CASE("scatter: max order 0 reduces to pure averaging") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 42);
  ScatterConfig cfg;
  cfg.max_order = 0;
  ScatteringCoefficients coeffs = scatter(x, cfg, bank);
  REQUIRE(coeffs.entries().size() == 1);

  ScatteringCoefficients first = first_order_map(x, bank);
  const Signal& a = coeffs.entries()[0].second;
  const Signal& b = first.at(PathIndex{});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("scatter: constants pass through order 0 and vanish at higher orders") {
  FilterBank bank = default_bank_16();
  const double c = -3.75;
  Signal x = Signal::real_2d(std::vector<double>(256, c), 16, 16);
  ScatteringCoefficients coeffs = scatter(x, ScatterConfig{}, bank);
  for (const auto& [path, entry] : coeffs.entries()) {
    for (const Complex& v : entry.values()) {
      if (path.order() == 0) {
        CHECK(v.real() == doctest::Approx(c).epsilon(1e-9));
      } else {
        CHECK(std::abs(v) <= 1e-9 * std::abs(c));
      }
    }
  }
}

TEST_CASE("scatter: impulse response matches the composed public operations") {
  FilterBank bank = default_bank_16();
  Signal delta = Signal::zeros_2d(16, 16);
  delta.at(0, 0) = Complex(1.0, 0.0);
  ScatteringCoefficients coeffs = first_order_map(delta, bank);

  const std::size_t factor = static_cast<std::size_t>(1) << bank.config.J;
  for (int j = 0; j < bank.config.J; ++j) {
    for (int k = 1; k <= bank.config.K; ++k) {
      Signal expected = subsample(convolve_fft(modulus(bank.psi_spatial(j, k)), bank.phi), factor);
      PathIndex p;
      p.lambdas.emplace_back(j, k);
      const Signal& got = coeffs.at(p);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(got[i] - expected[i]) < 1e-12);
    }
  }
}

TEST_CASE("scatter with max order 1 equals first_order_map exactly") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 7);
  ScatterConfig cfg;
  cfg.max_order = 1;
  ScatteringCoefficients a = scatter(x, cfg, bank);
  ScatteringCoefficients b = first_order_map(x, bank);
  REQUIRE(a.entries().size() == b.entries().size());
  for (std::size_t e = 0; e < a.entries().size(); ++e) {
    CHECK(a.entries()[e].first == b.entries()[e].first);
    const Signal& sa = a.entries()[e].second;
    const Signal& sb = b.entries()[e].second;
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i] == sb[i]);
  }
}

TEST_CASE("scatter: shifting by the invariance scale shifts the coefficients") {
  BankConfig c;
  c.J = 2;
  c.K = 4;
  c.height = c.width = 16;
  FilterBank bank = build_bank(c);
  Signal x = synth::texture_2d(16, 16, 4.0, 77);
  const long shift = 1 << c.J;

  ScatteringCoefficients base = scatter(x, ScatterConfig{}, bank);
  ScatteringCoefficients shifted = scatter(circular_shift(x, shift, 0), ScatterConfig{}, bank);

  for (std::size_t e = 0; e < base.entries().size(); ++e) {
    const Signal& sb = base.entries()[e].second;
    const Signal& ss = shifted.entries()[e].second;
    Signal expected = circular_shift(sb, shift / (1 << c.J), 0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      num += std::norm(ss[i] - expected[i]);
      den += std::norm(expected[i]);
    }
    CHECK(std::sqrt(num / std::max(den, 1e-300)) < 1e-10);
  }
}

TEST_CASE("scatter: one-pixel-shift sensitivity shrinks as J grows") {
  std::vector<double> medians;
  for (int J : {1, 3}) {
    BankConfig c;
    c.J = J;
    c.K = 4;
    c.height = c.width = 32;
    FilterBank bank = build_bank(c);
    std::vector<double> dists;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Signal x = synth::white_noise_2d(32, 32, 100 + seed);
      ScatterConfig cfg;
      cfg.max_order = 1;
      auto fx = feature_vector(scatter(x, cfg, bank));
      auto fs = feature_vector(scatter(circular_shift(x, 0, 1), cfg, bank));
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < fx.size(); ++i) {
        num += (fx[i] - fs[i]) * (fx[i] - fs[i]);
        den += fx[i] * fx[i];
      }
      dists.push_back(std::sqrt(num / den));
    }
    std::sort(dists.begin(), dists.end());
    medians.push_back(0.5 * (dists[4] + dists[5]));
  }
  CHECK(medians[1] < medians[0]);
}

TEST_CASE("scatter: energy budget and the zero signal") {
  FilterBank bank = build_bank(BankConfig{});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Signal x = synth::white_noise_2d(32, 32, 500 + seed);
    ScatteringCoefficients coeffs = scatter(x, ScatterConfig{}, bank);
    double energy = 0.0;
    const double rescale = coeffs.norm_rescale();
    for (const auto& [p, entry] : coeffs.entries()) {
      const double n = l2_norm(entry) * rescale;
      energy += n * n;
    }
    const double input = l2_norm(x) * l2_norm(x);
    CHECK(energy <= input * (1.0 + 1e-9));
  }

  Signal zero = Signal::zeros_2d(32, 32);
  auto fz = feature_vector(scatter(zero, ScatterConfig{}, bank));
  CHECK(feature_l2(fz) == 0.0);
}

TEST_CASE("scatter is non-expansive on a random pair") {
  FilterBank bank = build_bank(BankConfig{});
  Signal x = synth::white_noise_2d(32, 32, 1);
  Signal y = synth::white_noise_2d(32, 32, 2);
  ScatteringCoefficients cx = scatter(x, ScatterConfig{}, bank);
  ScatteringCoefficients cy = scatter(y, ScatterConfig{}, bank);
  auto fx = feature_vector(cx);
  auto fy = feature_vector(cy);
  double num = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) num += (fx[i] - fy[i]) * (fx[i] - fy[i]);
  const double feature_dist = std::sqrt(num) * cx.norm_rescale();

  std::vector<Complex> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  CHECK(feature_dist <= l2_norm(Signal(diff, 32, 32)));
}

TEST_CASE("feature_vector: length formula and determinism") {
  FilterBank bank = build_bank(BankConfig{});  // J=3 K=8 32x32
  Signal x = synth::texture_2d(32, 32, 4.0, 9);
  ScatteringCoefficients coeffs = scatter(x, ScatterConfig{}, bank);
  auto features = feature_vector(coeffs);
  CHECK(features.size() == 3472);  // (1 + 24 + 192) * 16
  CHECK(feature_column_names(coeffs).size() == 3472);

  auto again = feature_vector(scatter(x, ScatterConfig{}, bank));
  REQUIRE(features.size() == again.size());
  for (std::size_t i = 0; i < features.size(); ++i) CHECK(features[i] == again[i]);

  // order-0-only coefficients of an 8x8 grid at J=3 flatten to one value
  BankConfig small;
  small.J = 3;
  small.K = 1;
  small.height = small.width = 8;
  ScatterConfig cfg;
  cfg.max_order = 0;
  auto tiny = feature_vector(scatter(synth::texture_2d(8, 8, 2.0, 3), cfg, build_bank(small)));
  CHECK(tiny.size() == 1);
}

TEST_CASE("all-paths mode keeps the pruned paths' values and adds the rest") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 11);

  ScatterConfig pruned_cfg;
  ScatterConfig all_cfg;
  all_cfg.all_paths = true;
  ScatteringCoefficients pruned = scatter(x, pruned_cfg, bank);
  ScatteringCoefficients all = scatter(x, all_cfg, bank);

  const int JK = bank.config.J * bank.config.K;
  CHECK(all.entries().size() == 1 + JK + static_cast<std::size_t>(JK) * JK);
  CHECK(all.entries().size() == path_enumerate_all(bank.config.J, bank.config.K, 2).size());
  CHECK(pruned.entries().size() ==
        path_enumerate(bank.config.J, bank.config.K, 2).size());

  for (const auto& [p, entry] : pruned.entries()) {
    const Signal& other = all.at(p);
    for (std::size_t i = 0; i < entry.size(); ++i) CHECK(entry[i] == other[i]);
  }
}

TEST_CASE("internal subsampling approximates the full-resolution cascade") {
  FilterBank bank = build_bank(BankConfig{});
  Signal x = synth::texture_2d(32, 32, 4.0, 13);
  ScatterConfig full_cfg;
  ScatterConfig fast_cfg;
  fast_cfg.internal_subsampling = true;
  auto full = feature_vector(scatter(x, full_cfg, bank));
  auto fast = feature_vector(scatter(x, fast_cfg, bank));
  REQUIRE(full.size() == fast.size());
  CHECK(rel_feature_dist(fast, full) < 0.05);
}

TEST_CASE("oversampling refines the output grid consistently") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 21);
  ScatterConfig dense_cfg;
  dense_cfg.oversampling = 1;
  ScatteringCoefficients coarse = scatter(x, ScatterConfig{}, bank);
  ScatteringCoefficients dense = scatter(x, dense_cfg, bank);
  for (std::size_t e = 0; e < coarse.entries().size(); ++e) {
    const Signal& sc = coarse.entries()[e].second;
    Signal expected = subsample(dense.entries()[e].second, 2);
    REQUIRE(sc.size() == expected.size());
    for (std::size_t i = 0; i < sc.size(); ++i) CHECK(sc[i] == expected[i]);
  }
}

TEST_CASE("rectifier and sigmoid nonlinearities run and stay real") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 31);
  for (Rho rho : {Rho::Rectifier, Rho::Sigmoid}) {
    ScatterConfig cfg;
    cfg.rho = rho;
    auto features = feature_vector(scatter(x, cfg, bank));
    for (double v : features) CHECK(std::isfinite(v));
  }
}

TEST_CASE("scatter validates its inputs") {
  FilterBank bank = default_bank_16();
  CHECK_THROWS_AS(scatter(Signal(), ScatterConfig{}, bank), InvalidInputError);
  CHECK_THROWS_AS(scatter(synth::texture_2d(8, 8, 2.0, 1), ScatterConfig{}, bank),
                  InvalidInputError);
  ScatterConfig too_deep;
  too_deep.max_order = 5;
  CHECK_THROWS_AS(scatter(synth::texture_2d(16, 16, 2.0, 1), too_deep, bank), InvalidInputError);
  ScatterConfig bad_os;
  bad_os.oversampling = 9;
  CHECK_THROWS_AS(scatter(synth::texture_2d(16, 16, 2.0, 1), bad_os, bank), InvalidInputError);

  ScatteringCoefficients coeffs = scatter(synth::texture_2d(16, 16, 2.0, 1), ScatterConfig{}, bank);
  PathIndex missing;
  missing.lambdas.emplace_back(7, 7);
  CHECK_THROWS_AS(coeffs.at(missing), InvalidInputError);
}

TEST_CASE("coefficient container round-trips bit-exactly and CSV has the right shape") {
  FilterBank bank = default_bank_16();
  Signal x = synth::texture_2d(16, 16, 3.0, 55);
  ScatteringCoefficients coeffs = scatter(x, ScatterConfig{}, bank);

  const std::string path = "test_coeffs.sksc";
  save_coefficients(coeffs, path);
  ScatteringCoefficients loaded = load_coefficients(path);
  auto a = feature_vector(coeffs);
  auto b = feature_vector(loaded);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(loaded.output_subsample() == coeffs.output_subsample());
  REQUIRE(loaded.entries().size() == coeffs.entries().size());
  for (std::size_t e = 0; e < coeffs.entries().size(); ++e)
    CHECK(loaded.entries()[e].first == coeffs.entries()[e].first);
  std::remove(path.c_str());

  std::ostringstream csv;
  write_coefficients_csv(coeffs, csv);
  std::istringstream in(csv.str());
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(!std::getline(in, extra));
  CHECK(header.substr(0, 5) == "m0_s0");
  CHECK(std::count(header.begin(), header.end(), ',') + 1 ==
        static_cast<long>(a.size()));
}
