#include "scatterkit/filterbank.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "binary_io.hpp"
#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed frequency index of DFT bin k on a length-n axis (Nyquist maps to -n/2).
long signed_bin(std::size_t k, std::size_t n) {
  return static_cast<long>(k) < static_cast<long>((n + 1) / 2)
             ? static_cast<long>(k)
             : static_cast<long>(k) - static_cast<long>(n);
}

double angular(std::size_t k, std::size_t n) {
  return kTwoPi * static_cast<double>(signed_bin(k, n)) / static_cast<double>(n);
}

// Continuous frequency profiles. The directional envelope is Gaussian with
// radial width 1/sigma and tangential width slant/sigma; the gabor is that
// envelope shifted to the center frequency.
double gabor_profile_2d(double wy, double wx, double sigma, double xi, double cth, double sth,
                        double slant) {
  const double wpar = wx * cth + wy * sth;
  const double wperp = -wx * sth + wy * cth;
  const double dpar = wpar - xi;
  return std::exp(-0.5 * sigma * sigma * (dpar * dpar + wperp * wperp / (slant * slant)));
}

double gabor_profile_1d(double w, double sigma, double xi) {
  const double d = w - xi;
  return std::exp(-0.5 * sigma * sigma * d * d);
}

struct FoldedFilter {
  std::vector<double> main;    // m = 0 term per grid point
  std::vector<double> folded;  // alias-summed value per grid point
};

// Samples a continuous profile on the discrete grid with alias folding.
template <typename Profile>
FoldedFilter fold_on_grid(std::size_t h, std::size_t w, int dim, Profile&& profile) {
  const int reach = 2;  // Gaussian tails are negligible past two alias periods
  FoldedFilter out;
  out.main.resize(h * w);
  out.folded.resize(h * w);
  for (std::size_t ky = 0; ky < h; ++ky) {
    for (std::size_t kx = 0; kx < w; ++kx) {
      const double wy = dim == 2 ? angular(ky, h) : 0.0;
      const double wx = angular(kx, w);
      double sum = 0.0, main = 0.0;
      for (int my = (dim == 2 ? -reach : 0); my <= (dim == 2 ? reach : 0); ++my) {
        for (int mx = -reach; mx <= reach; ++mx) {
          const double v = profile(wy + kTwoPi * my, wx + kTwoPi * mx);
          sum += v;
          if (my == 0 && mx == 0) main = v;
        }
      }
      out.main[ky * w + kx] = main;
      out.folded[ky * w + kx] = sum;
    }
  }
  return out;
}

// Per-point wavelet part of the Littlewood-Paley sum; in 1D this includes the
// reflected responses so the analytic wavelets cover real signals.
std::vector<double> wavelet_lp_sum(const FilterBank& bank) {
  const std::size_t h = bank.config.height, w = bank.config.width;
  std::vector<double> sum(h * w, 0.0);
  for (const auto& psi : bank.psi_hat) {
    for (std::size_t i = 0; i < psi.size(); ++i) sum[i] += std::norm(psi[i]);
    if (bank.config.dim == 1) {
      for (std::size_t k = 0; k < w; ++k) {
        const std::size_t refl = (w - k) % w;
        sum[k] += std::norm(psi[refl]);
      }
    }
  }
  return sum;
}

void validate_config(const BankConfig& c) {
  if (c.J < 0) throw InvalidInputError("bank config: J must be nonnegative");
  if (c.K < 1) throw InvalidInputError("bank config: K must be positive");
  if (c.dim != 1 && c.dim != 2) throw InvalidInputError("bank config: dim must be 1 or 2");
  if (c.dim == 1 && c.height != 1)
    throw InvalidInputError("bank config: 1D banks must have height 1");
  if (c.height == 0 || c.width == 0) throw InvalidInputError("bank config: empty grid");
  if (!(c.xi > 0.0) || !(c.sigma > 0.0) || !(c.slant > 0.0))
    throw InvalidInputError("bank config: xi, sigma and slant must be positive");
  const std::size_t scale = static_cast<std::size_t>(1) << c.J;
  const std::size_t min_dim = c.dim == 2 ? std::min(c.height, c.width) : c.width;
  if (scale > min_dim)
    throw InvalidInputError("bank config: grid too small for invariance scale 2^J");
}

}  // namespace

Signal FilterBank::psi_spatial(int j, int k) const {
  Spectrum spec;
  spec.values = psi(j, k);
  spec.height = config.height;
  spec.width = config.width;
  spec.dim = config.dim;
  spec.step = 1.0;
  return dft_inverse(spec);
}

FilterBank build_bank(const BankConfig& config) {
  validate_config(config);
  const std::size_t h = config.height, w = config.width;
  const std::size_t n = h * w;

  FilterBank bank;
  bank.config = config;

  // Low-pass phi at scale 2^J: folded Gaussian spectrum, DC renormalized to 1
  // so the spatial kernel sums to exactly 1.
  const double sigma_phi = config.sigma * static_cast<double>(1 << config.J);
  FoldedFilter phi = fold_on_grid(h, w, config.dim, [&](double wy, double wx) {
    return std::exp(-0.5 * sigma_phi * sigma_phi * (wy * wy + wx * wx));
  });
  const double phi_dc = phi.folded[0];
  bank.phi_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) bank.phi_hat[i] = Complex(phi.folded[i] / phi_dc, 0.0);

  {
    Spectrum spec{bank.phi_hat, h, w, config.dim, 1.0};
    Signal spatial = dft_inverse(spec);
    std::vector<Complex> real_part(n);
    for (std::size_t i = 0; i < n; ++i) real_part[i] = Complex(spatial[i].real(), 0.0);
    bank.phi = config.dim == 1 ? Signal(std::move(real_part)) : Signal(std::move(real_part), h, w);
  }

  // Wavelets: in 2D one envelope per scale rotated to K directions over the
  // full circle; in 1D K sub-octave dilations per scale on the positive
  // frequency axis. The corrective term beta * gaussian zeroes the DC bin
  // exactly (zero average on the discrete grid).
  for (int j = 0; j < config.J; ++j) {
    for (int k = 1; k <= config.K; ++k) {
      FoldedFilter gabor, gauss;
      double dilation = 1.0;
      if (config.dim == 2) {
        dilation = std::pow(2.0, j);
        const double sigma_a = config.sigma * dilation;
        const double xi_a = config.xi / dilation;
        const double theta = kTwoPi * static_cast<double>(k - 1) / config.K;
        const double cth = std::cos(theta), sth = std::sin(theta);
        gabor = fold_on_grid(h, w, 2, [&](double wy, double wx) {
          return gabor_profile_2d(wy, wx, sigma_a, xi_a, cth, sth, config.slant);
        });
        gauss = fold_on_grid(h, w, 2, [&](double wy, double wx) {
          return gabor_profile_2d(wy, wx, sigma_a, 0.0, cth, sth, config.slant);
        });
      } else {
        dilation = std::pow(2.0, j + static_cast<double>(k - 1) / config.K);
        const double sigma_a = config.sigma * dilation;
        const double xi_a = config.xi / dilation;
        gabor = fold_on_grid(h, w, 1, [&](double, double wx) {
          return gabor_profile_1d(wx, sigma_a, xi_a);
        });
        gauss = fold_on_grid(h, w, 1, [&](double, double wx) {
          return gabor_profile_1d(wx, sigma_a, 0.0);
        });
      }

      const double beta = gabor.folded[0] / gauss.folded[0];
      const double gain =
          config.normalization == Normalization::L2
              ? std::pow(dilation, 0.5 * static_cast<double>(config.dim))
              : 1.0;
      std::vector<Complex> psi(n);
      double alias_energy = 0.0, total_energy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double folded = gabor.folded[i] - beta * gauss.folded[i];
        const double main = gabor.main[i] - beta * gauss.main[i];
        psi[i] = Complex(gain * folded, 0.0);
        alias_energy += (folded - main) * (folded - main);
        total_energy += folded * folded;
      }
      if (total_energy > 0.0 && alias_energy / total_energy > 1e-3) {
        std::ostringstream msg;
        msg << "psi j=" << j << " k=" << k << " folds "
            << 100.0 * alias_energy / total_energy
            << "% of its energy across the Nyquist boundary";
        bank.warnings.push_back(msg.str());
      }
      bank.psi_hat.push_back(std::move(psi));
    }
  }

  // Frame normalization: largest wavelet gain that keeps the Littlewood-Paley
  // sum at or below 1 everywhere. phi is left untouched so its unit integral
  // survives. (Rescaling the whole bank would break one of the two.)
  if (!bank.psi_hat.empty()) {
    const std::vector<double> lp = wavelet_lp_sum(bank);
    double c2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
      if (lp[i] <= 0.0) continue;
      const double headroom = std::max(0.0, 1.0 - std::norm(bank.phi_hat[i]));
      c2 = std::min(c2, headroom / lp[i]);
    }
    if (std::isfinite(c2) && c2 > 0.0) {
      const double c = std::sqrt(c2);
      for (auto& psi : bank.psi_hat)
        for (Complex& v : psi) v *= c;
    }
  }

  auto bounds = littlewood_paley(bank);
  bank.frame_a = bounds.first;
  bank.frame_b = bounds.second;
  return bank;
}

std::pair<double, double> littlewood_paley(const FilterBank& bank) {
  const std::size_t n = bank.config.grid_size();
  std::vector<double> sum = wavelet_lp_sum(bank);
  for (std::size_t i = 0; i < n; ++i) sum[i] += std::norm(bank.phi_hat[i]);
  double a = std::numeric_limits<double>::infinity(), b = 0.0;
  for (std::size_t i = 1; i < n; ++i) {  // skip DC
    a = std::min(a, sum[i]);
    b = std::max(b, sum[i]);
  }
  return {a, b};
}

Signal zero_mean_correct(const Signal& psi) {
  if (psi.empty()) throw InvalidInputError("zero_mean_correct: empty signal");
  const Complex mean_sum = total_sum(psi);
  double envelope_sum = 0.0;
  for (const Complex& v : psi.values()) envelope_sum += std::abs(v);
  if (envelope_sum == 0.0) return psi;  // all-zero input is already zero-mean

  const Complex scale = mean_sum / envelope_sum;
  std::vector<Complex> out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = psi[i] - scale * std::abs(psi[i]);
  if (psi.dim() == 1) return Signal(std::move(out), psi.step());
  return Signal(std::move(out), psi.height(), psi.width(), psi.step());
}

void save_bank(const FilterBank& bank, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open bank file for writing: " + path);

  os.write("SKFB", 4);
  detail::write_u32(os, 1);  // version
  detail::write_u32(os, static_cast<std::uint32_t>(bank.config.dim));
  detail::write_u32(os, static_cast<std::uint32_t>(bank.config.J));
  detail::write_u32(os, static_cast<std::uint32_t>(bank.config.K));
  detail::write_u32(os, static_cast<std::uint32_t>(bank.config.height));
  detail::write_u32(os, static_cast<std::uint32_t>(bank.config.width));
  detail::write_u32(os, bank.config.normalization == Normalization::L2 ? 1u : 0u);
  detail::write_u32(os, static_cast<std::uint32_t>(bank.psi_hat.size()));
  detail::write_f64(os, bank.config.xi);
  detail::write_f64(os, bank.config.sigma);
  detail::write_f64(os, bank.config.slant);
  detail::write_f64(os, bank.frame_a);
  detail::write_f64(os, bank.frame_b);

  auto write_filter = [&](const std::vector<Complex>& f) {
    for (const Complex& v : f) {
      detail::write_f64(os, v.real());
      detail::write_f64(os, v.imag());
    }
  };
  write_filter(bank.phi_hat);
  for (const auto& psi : bank.psi_hat) write_filter(psi);
  if (!os) throw IoError("failed writing bank file: " + path);
  os.close();

  nlohmann::json meta;
  meta["format"] = "scatterkit-bank-v1";
  meta["dim"] = bank.config.dim;
  meta["J"] = bank.config.J;
  meta["K"] = bank.config.K;
  meta["height"] = bank.config.height;
  meta["width"] = bank.config.width;
  meta["xi"] = bank.config.xi;
  meta["sigma"] = bank.config.sigma;
  meta["slant"] = bank.config.slant;
  meta["normalization"] = bank.config.normalization == Normalization::L2 ? "L2" : "L1";
  meta["frame_bounds"] = {bank.frame_a, bank.frame_b};
  meta["wavelets"] = bank.psi_hat.size();
  meta["warnings"] = bank.warnings;
  std::ofstream js(path + ".json");
  if (!js) throw IoError("cannot open bank sidecar for writing: " + path + ".json");
  js << meta.dump(2) << "\n";
}

FilterBank load_bank(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open bank file: " + path);

  char magic[4];
  if (!is.read(magic, 4)) throw IoError("truncated bank file: " + path);
  if (std::string(magic, 4) != "SKFB") {
    std::ostringstream msg;
    msg << "bad bank magic in " << path << ": bytes";
    for (int i = 0; i < 4; ++i)
      msg << " 0x" << std::hex << (static_cast<unsigned>(magic[i]) & 0xff);
    throw FormatError(msg.str());
  }
  const std::uint32_t version = detail::read_u32(is, "version");
  if (version != 1) throw FormatError("unsupported bank version " + std::to_string(version));

  FilterBank bank;
  bank.config.dim = static_cast<int>(detail::read_u32(is, "dim"));
  bank.config.J = static_cast<int>(detail::read_u32(is, "J"));
  bank.config.K = static_cast<int>(detail::read_u32(is, "K"));
  bank.config.height = detail::read_u32(is, "height");
  bank.config.width = detail::read_u32(is, "width");
  bank.config.normalization =
      detail::read_u32(is, "normalization") == 1 ? Normalization::L2 : Normalization::L1;
  const std::uint32_t count = detail::read_u32(is, "wavelet count");
  bank.config.xi = detail::read_f64(is, "xi");
  bank.config.sigma = detail::read_f64(is, "sigma");
  bank.config.slant = detail::read_f64(is, "slant");
  bank.frame_a = detail::read_f64(is, "frame A");
  bank.frame_b = detail::read_f64(is, "frame B");

  if (bank.config.dim != 1 && bank.config.dim != 2)
    throw FormatError("bank file declares invalid dim");
  const std::size_t n = bank.config.grid_size();
  if (n == 0) throw FormatError("bank file declares an empty grid");

  auto read_filter = [&](const std::string& what) {
    std::vector<Complex> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double re = detail::read_f64(is, what);
      const double im = detail::read_f64(is, what);
      f[i] = Complex(re, im);
    }
    return f;
  };
  bank.phi_hat = read_filter("phi spectrum");
  for (std::uint32_t i = 0; i < count; ++i) bank.psi_hat.push_back(read_filter("psi spectrum"));

  {
    Spectrum spec{bank.phi_hat, bank.config.height, bank.config.width, bank.config.dim, 1.0};
    Signal spatial = dft_inverse(spec);
    std::vector<Complex> real_part(n);
    for (std::size_t i = 0; i < n; ++i) real_part[i] = Complex(spatial[i].real(), 0.0);
    bank.phi = bank.config.dim == 1
                   ? Signal(std::move(real_part))
                   : Signal(std::move(real_part), bank.config.height, bank.config.width);
  }
  return bank;
}

}  // namespace scatterkit
