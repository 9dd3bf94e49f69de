#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "scatterkit/errors.hpp"
#include "scatterkit/filterbank.hpp"
#include "scatterkit/signal.hpp"
#include "scatterkit/synth.hpp"

using namespace scatterkit;

namespace {

constexpr double kPi = std::numbers::pi;

double spatial_mean_mag(const Signal& psi) {
  return std::abs(total_sum(psi));
}

// energy centroid of |psi_hat|^2 in |omega|
double freq_centroid(const FilterBank& bank, int j, int k) {
  const std::size_t h = bank.config.height, w = bank.config.width;
  const auto& psi = bank.psi(j, k);
  auto ang = [](std::size_t idx, std::size_t n) {
    const long s = static_cast<long>(idx) < static_cast<long>((n + 1) / 2)
                       ? static_cast<long>(idx)
                       : static_cast<long>(idx) - static_cast<long>(n);
    return 2.0 * kPi * static_cast<double>(s) / static_cast<double>(n);
  };
  double num = 0.0, den = 0.0;
  for (std::size_t ky = 0; ky < h; ++ky) {
    for (std::size_t kx = 0; kx < w; ++kx) {
      const double wy = bank.config.dim == 2 ? ang(ky, h) : 0.0;
      const double wx = ang(kx, w);
      const double e = std::norm(psi[ky * w + kx]);
      num += std::hypot(wy, wx) * e;
      den += e;
    }
  }
  return num / den;
}

BankConfig alias_clean_1d() {
  BankConfig c;
  c.dim = 1;
  c.height = 1;
  c.width = 512;
  c.J = 5;
  c.K = 1;
  c.xi = 1.2;
  c.sigma = 2.0;
  return c;
}

}  // namespace

TEST_CASE("build_bank: J=0 yields an averaging-only bank") {
  BankConfig c;
  c.J = 0;
  c.height = c.width = 16;
  FilterBank bank = build_bank(c);
  CHECK(bank.wavelet_count() == 0);
  CHECK(std::abs(total_sum(bank.phi) - Complex(1.0, 0.0)) < 1e-9);
  CHECK(bank.frame_a > 0.0);
  CHECK(bank.frame_b <= 1.0 + 1e-6);
}

TEST_CASE("build_bank: default 2D bank satisfies the hard invariants") {
  FilterBank bank = build_bank(BankConfig{});
  REQUIRE(bank.wavelet_count() == 24);

  // phi integrates to one, is real and (essentially) nonnegative
  CHECK(std::abs(total_sum(bank.phi) - Complex(1.0, 0.0)) < 1e-9);
  double phi_min = 1e9, phi_max = -1e9;
  for (const Complex& v : bank.phi.values()) {
    CHECK(v.imag() == 0.0);
    phi_min = std::min(phi_min, v.real());
    phi_max = std::max(phi_max, v.real());
  }
  CHECK(phi_max > 0.0);
  CHECK(phi_min >= -1e-12 * phi_max);

  // every wavelet has zero average
  for (int j = 0; j < bank.config.J; ++j) {
    for (int k = 1; k <= bank.config.K; ++k) {
      Signal psi = bank.psi_spatial(j, k);
      CHECK(spatial_mean_mag(psi) <= 1e-9 * l1_norm(psi));
    }
  }

  // frame bounds after normalization
  CHECK(bank.frame_a > 0.0);
  CHECK(bank.frame_a <= bank.frame_b);
  CHECK(bank.frame_b <= 1.0 + 1e-6);
  CHECK(bank.frame_b / bank.frame_a <= 3.0);
}

TEST_CASE("build_bank rejects a grid smaller than the invariance scale") {
  BankConfig c;
  c.J = 4;
  c.height = c.width = 8;
  CHECK_THROWS_AS(build_bank(c), InvalidInputError);
  c.J = 3;
  CHECK_NOTHROW(build_bank(c));
}

TEST_CASE("build_bank: aliasing diagnostics warn but do not fail") {
  // the aggressive default xi keeps its j=0 ring near Nyquist: expect warnings
  FilterBank aggressive = build_bank(BankConfig{});
  CHECK(!aggressive.warnings.empty());

  // a gentle 1D bank stays clean
  FilterBank gentle = build_bank(alias_clean_1d());
  CHECK(gentle.warnings.empty());
}

TEST_CASE("littlewood_paley: flat synthetic wavelet gives (1, 1)") {
  FilterBank bank;
  bank.config.dim = 2;
  bank.config.J = 1;
  bank.config.K = 1;
  bank.config.height = bank.config.width = 8;
  bank.phi_hat.assign(64, Complex(0.0, 0.0));
  bank.psi_hat.push_back(std::vector<Complex>(64, Complex(1.0, 0.0)));
  auto [a, b] = littlewood_paley(bank);
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("littlewood_paley: dropping phi strictly lowers A on the default bank") {
  FilterBank bank = build_bank(BankConfig{});
  auto [a, b] = littlewood_paley(bank);
  FilterBank no_phi = bank;
  no_phi.phi_hat.assign(no_phi.phi_hat.size(), Complex(0.0, 0.0));
  auto [a2, b2] = littlewood_paley(no_phi);
  CHECK(a2 < a);
  CHECK(b2 <= b + 1e-12);
}

TEST_CASE("littlewood_paley: 1D analytic bank covers real signals via reflections") {
  FilterBank bank = build_bank(alias_clean_1d());
  CHECK(bank.frame_a > 0.0);
  CHECK(bank.frame_b <= 1.0 + 1e-6);
}

TEST_CASE("zero_mean_correct: fixpoint, raw Morlet, constant input") {
  // already zero-mean input passes through
  FilterBank bank = build_bank(alias_clean_1d());
  Signal psi = bank.psi_spatial(2, 1);
  Signal corrected = zero_mean_correct(psi);
  double diff = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    diff = std::max(diff, std::abs(psi[i] - corrected[i]));
  CHECK(diff < 1e-14);

  // raw discrete Morlet gains an exactly-zero mean
  Signal raw = synth::morlet_mother_1d(256, 3.0 * kPi / 4.0, 0.85 * 2.0);
  CHECK(std::abs(total_sum(raw)) > 1e-10);  // raw really is biased
  Signal fixed = zero_mean_correct(raw);
  CHECK(std::abs(total_sum(fixed)) / 256.0 <= 1e-12);
  // the correction moved it by no more than the bias spread over the envelope
  double l2_change = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) l2_change += std::norm(raw[i] - fixed[i]);
  const double envelope_factor = l2_norm(raw) / l1_norm(raw);
  CHECK(std::sqrt(l2_change) <= std::abs(total_sum(raw)) * envelope_factor * (1.0 + 1e-12));

  // constant input collapses to zero
  Signal constant = Signal::real_1d(std::vector<double>(32, -2.5));
  Signal zeroed = zero_mean_correct(constant);
  for (const Complex& v : zeroed.values()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("dilation law: L1 norms constant and centroids halve on an alias-clean bank") {
  FilterBank bank = build_bank(alias_clean_1d());
  std::vector<double> l1s, centroids;
  for (int j = 0; j < bank.config.J; ++j) {
    l1s.push_back(l1_norm(bank.psi_spatial(j, 1)));
    centroids.push_back(freq_centroid(bank, j, 1));
  }
  for (std::size_t j = 1; j < l1s.size(); ++j) {
    CHECK(l1s[j] == doctest::Approx(l1s[0]).epsilon(0.02));
    CHECK(centroids[j] / centroids[j - 1] == doctest::Approx(0.5).epsilon(0.10));
  }
}

TEST_CASE("dilation law holds away from the aliased scale on the default 2D bank") {
  FilterBank bank = build_bank(BankConfig{});
  CHECK(l1_norm(bank.psi_spatial(2, 1)) ==
        doctest::Approx(l1_norm(bank.psi_spatial(1, 1))).epsilon(0.02));
  CHECK(freq_centroid(bank, 2, 1) / freq_centroid(bank, 1, 1) ==
        doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("L2 normalization keeps wavelet L2 norms constant across scales") {
  BankConfig c = alias_clean_1d();
  c.normalization = Normalization::L2;
  FilterBank bank = build_bank(c);
  const double base = l2_norm(bank.psi_spatial(0, 1));
  for (int j = 1; j < c.J; ++j)
    CHECK(l2_norm(bank.psi_spatial(j, 1)) == doctest::Approx(base).epsilon(0.02));
}

TEST_CASE("bank construction is deterministic bit-for-bit") {
  FilterBank a = build_bank(BankConfig{});
  FilterBank b = build_bank(BankConfig{});
  REQUIRE(a.psi_hat.size() == b.psi_hat.size());
  for (std::size_t f = 0; f < a.psi_hat.size(); ++f)
    for (std::size_t i = 0; i < a.psi_hat[f].size(); ++i)
      CHECK(a.psi_hat[f][i] == b.psi_hat[f][i]);
  for (std::size_t i = 0; i < a.phi_hat.size(); ++i) CHECK(a.phi_hat[i] == b.phi_hat[i]);
  CHECK(a.frame_a == b.frame_a);
  CHECK(a.frame_b == b.frame_b);
}

TEST_CASE("bank save/load round-trips bit-exactly") {
  FilterBank bank = build_bank(BankConfig{});
  const std::string path = "test_bank.skfb";
  save_bank(bank, path);
  FilterBank loaded = load_bank(path);

  CHECK(loaded.config.J == bank.config.J);
  CHECK(loaded.config.K == bank.config.K);
  CHECK(loaded.config.dim == bank.config.dim);
  CHECK(loaded.config.height == bank.config.height);
  CHECK(loaded.config.width == bank.config.width);
  CHECK(loaded.config.xi == bank.config.xi);
  CHECK(loaded.config.sigma == bank.config.sigma);
  CHECK(loaded.config.slant == bank.config.slant);
  CHECK(loaded.frame_a == bank.frame_a);
  CHECK(loaded.frame_b == bank.frame_b);
  REQUIRE(loaded.psi_hat.size() == bank.psi_hat.size());
  for (std::size_t f = 0; f < bank.psi_hat.size(); ++f)
    for (std::size_t i = 0; i < bank.psi_hat[f].size(); ++i)
      CHECK(loaded.psi_hat[f][i] == bank.psi_hat[f][i]);
  for (std::size_t i = 0; i < bank.phi_hat.size(); ++i)
    CHECK(loaded.phi_hat[i] == bank.phi_hat[i]);
  for (std::size_t i = 0; i < bank.phi.size(); ++i) CHECK(loaded.phi[i] == bank.phi[i]);

  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("bank loader rejects bad files") {
  CHECK_THROWS_AS(load_bank("does_not_exist.skfb"), IoError);

  const std::string path = "bad_bank.skfb";
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite("NOPE", 1, 4, f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_bank(path), FormatError);

  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fwrite("SKFB", 1, 4, f);  // magic only, then truncated
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_bank(path), IoError);
  std::remove(path.c_str());
}
