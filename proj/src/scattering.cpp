#include "scatterkit/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "binary_io.hpp"
#include "scatterkit/errors.hpp"

namespace scatterkit {
namespace {

Complex apply_rho(Complex v, Rho rho) {
  switch (rho) {
    case Rho::Modulus:
      return Complex(std::abs(v), 0.0);
    case Rho::Rectifier:
      return Complex(std::max(v.real(), 0.0), 0.0);
    case Rho::Sigmoid:
      return Complex(1.0 / (1.0 + std::exp(-v.real())), 0.0);
  }
  return v;
}

// Alias-folds a full-grid filter spectrum onto a by-factor subsampled grid.
// Valid whenever the data it multiplies is (approximately) band-limited to
// the reduced Nyquist cell.
std::vector<Complex> fold_filter(const std::vector<Complex>& f, std::size_t h, std::size_t w,
                                 int dim, std::size_t factor) {
  if (factor == 1) return f;
  const std::size_t oh = dim == 2 ? h / factor : 1;
  const std::size_t ow = w / factor;
  std::vector<Complex> out(oh * ow, Complex(0.0, 0.0));
  const std::size_t ay_count = dim == 2 ? factor : 1;
  for (std::size_t ky = 0; ky < oh; ++ky) {
    for (std::size_t kx = 0; kx < ow; ++kx) {
      Complex acc(0.0, 0.0);
      for (std::size_t ay = 0; ay < ay_count; ++ay)
        for (std::size_t ax = 0; ax < factor; ++ax) acc += f[(ky + ay * oh) * w + (kx + ax * ow)];
      out[ky * ow + kx] = acc;
    }
  }
  return out;
}

struct Cascade {
  const FilterBank& bank;
  const ScatterConfig& config;
  std::size_t full_h, full_w;
  std::size_t output_factor;  // 2^(J - oversampling), relative to the input grid
  ScatteringCoefficients* out;

  // u_hat: spectrum of the current U at its current resolution (subsampled by
  // `res` from the input grid).
  void visit(const Spectrum& u_hat, const PathIndex& path, std::size_t res) {
    emit_entry(u_hat, path, res);
    if (path.order() >= config.max_order) return;

    const int last_j = path.lambdas.empty() ? -1 : path.lambdas.back().first;
    for (int j = 0; j < bank.config.J; ++j) {
      if (!config.all_paths && j <= last_j) continue;  // frequency-decreasing pruning
      for (int k = 1; k <= bank.config.K; ++k) {
        Spectrum prod = u_hat;
        const std::vector<Complex> psi =
            fold_filter(bank.psi(j, k), full_h, full_w, bank.config.dim, res);
        for (std::size_t i = 0; i < prod.size(); ++i) prod.values[i] *= psi[i];

        Signal v = dft_inverse(prod);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = apply_rho(v[i], config.rho);

        std::size_t child_res = res;
        if (config.internal_subsampling) {
          // |U * psi_j| is smooth at scale ~2^j; keep just enough samples
          const std::size_t target = std::min(static_cast<std::size_t>(1) << j, output_factor);
          if (target > res) {
            v = subsample(v, target / res);
            child_res = target;
          }
        }
        PathIndex child = path;
        child.lambdas.emplace_back(j, k);
        visit(dft_forward(v), child, child_res);
      }
    }
  }

  void emit_entry(const Spectrum& u_hat, const PathIndex& path, std::size_t res) {
    Spectrum prod = u_hat;
    const std::vector<Complex> phi =
        fold_filter(bank.phi_hat, full_h, full_w, bank.config.dim, res);
    for (std::size_t i = 0; i < prod.size(); ++i) prod.values[i] *= phi[i];
    Signal smooth = dft_inverse(prod);
    Signal sub = subsample(smooth, output_factor / res);

    std::vector<double> real_part(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) real_part[i] = sub[i].real();
    Signal entry = sub.dim() == 1
                       ? Signal::real_1d(real_part, sub.step())
                       : Signal::real_2d(real_part, sub.height(), sub.width(), sub.step());
    out->add(path, std::move(entry));
  }
};

}  // namespace

std::string PathIndex::name() const {
  std::ostringstream os;
  os << "m" << order();
  for (const auto& [j, k] : lambdas) os << "_j" << j << "k" << k;
  return os.str();
}

bool canonical_less(const PathIndex& a, const PathIndex& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  for (int i = 0; i < a.order(); ++i) {
    if (a.lambdas[i].first != b.lambdas[i].first)
      return a.lambdas[i].first < b.lambdas[i].first;
  }
  for (int i = 0; i < a.order(); ++i) {
    if (a.lambdas[i].second != b.lambdas[i].second)
      return a.lambdas[i].second < b.lambdas[i].second;
  }
  return false;
}

ScatteringCoefficients::ScatteringCoefficients(BankConfig bank_config, ScatterConfig config,
                                               std::size_t output_subsample)
    : bank_config_(bank_config), config_(config), output_subsample_(output_subsample) {}

void ScatteringCoefficients::add(PathIndex path, Signal entry) {
  entries_.emplace_back(std::move(path), std::move(entry));
}

void ScatteringCoefficients::sort_canonical() {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
}

const Signal& ScatteringCoefficients::at(const PathIndex& path) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), path,
      [](const auto& entry, const PathIndex& p) { return canonical_less(entry.first, p); });
  if (it == entries_.end() || !(it->first == path))
    throw InvalidInputError("no coefficient for path " + path.name());
  return it->second;
}

double ScatteringCoefficients::norm_rescale() const {
  return std::pow(static_cast<double>(output_subsample_),
                  static_cast<double>(bank_config_.dim) / 2.0);
}

std::vector<PathIndex> path_enumerate(int J, int K, int max_order) {
  if (max_order < 0 || max_order > J)
    throw InvalidInputError("path_enumerate: max order must lie in [0, J]");
  std::vector<PathIndex> out;
  out.push_back(PathIndex{});

  for (int q = 1; q <= max_order; ++q) {
    // strictly increasing j-combinations in lexicographic order
    std::vector<int> js(q);
    for (int i = 0; i < q; ++i) js[i] = i;
    while (true) {
      // all k-tuples in lexicographic order
      std::vector<int> ks(q, 1);
      while (true) {
        PathIndex p;
        for (int i = 0; i < q; ++i) p.lambdas.emplace_back(js[i], ks[i]);
        out.push_back(std::move(p));
        int pos = q - 1;
        while (pos >= 0 && ks[pos] == K) {
          ks[pos] = 1;
          --pos;
        }
        if (pos < 0) break;
        ++ks[pos];
      }
      // next combination
      int pos = q - 1;
      while (pos >= 0 && js[pos] == J - (q - pos)) --pos;
      if (pos < 0) break;
      ++js[pos];
      for (int i = pos + 1; i < q; ++i) js[i] = js[i - 1] + 1;
    }
  }
  return out;
}

std::vector<PathIndex> path_enumerate_all(int J, int K, int max_order) {
  if (max_order < 0 || max_order > J)
    throw InvalidInputError("path_enumerate_all: max order must lie in [0, J]");
  std::vector<PathIndex> out;
  out.push_back(PathIndex{});
  for (int q = 1; q <= max_order; ++q) {
    std::vector<int> js(q, 0), ks(q, 1);
    while (true) {
      PathIndex p;
      for (int i = 0; i < q; ++i) p.lambdas.emplace_back(js[i], ks[i]);
      out.push_back(std::move(p));
      // advance (js, ks) with ks the fast axis, matching canonical order
      int pos = q - 1;
      while (pos >= 0 && ks[pos] == K) {
        ks[pos] = 1;
        --pos;
      }
      if (pos >= 0) {
        ++ks[pos];
        continue;
      }
      pos = q - 1;
      while (pos >= 0 && js[pos] == J - 1) {
        js[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++js[pos];
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

ScatteringCoefficients scatter(const Signal& x, const ScatterConfig& config,
                               const FilterBank& bank) {
  if (x.empty()) throw InvalidInputError("scatter: empty signal");
  if (x.dim() != bank.config.dim || x.height() != bank.config.height ||
      x.width() != bank.config.width)
    throw InvalidInputError("scatter: signal grid does not match the filter bank");
  if (config.max_order < 0 || config.max_order > bank.config.J)
    throw InvalidInputError("scatter config: max order must lie in [0, J]");
  if (config.oversampling < 0 || config.oversampling > bank.config.J)
    throw InvalidInputError("scatter config: oversampling must lie in [0, J]");

  const std::size_t output_factor = static_cast<std::size_t>(1)
                                    << (bank.config.J - config.oversampling);
  ScatteringCoefficients out(bank.config, config, output_factor);
  Cascade cascade{bank, config, x.height(), x.width(), output_factor, &out};
  cascade.visit(dft_forward(x), PathIndex{}, 1);
  out.sort_canonical();
  return out;
}

ScatteringCoefficients first_order_map(const Signal& x, const FilterBank& bank) {
  ScatterConfig config;
  config.max_order = std::min(1, bank.config.J);
  return scatter(x, config, bank);
}

std::vector<double> feature_vector(const ScatteringCoefficients& coeffs) {
  std::vector<double> out;
  for (const auto& [path, entry] : coeffs.entries())
    for (const Complex& v : entry.values()) out.push_back(v.real());
  return out;
}

std::vector<std::string> feature_column_names(const ScatteringCoefficients& coeffs) {
  std::vector<std::string> out;
  for (const auto& [path, entry] : coeffs.entries()) {
    const std::string base = path.name();
    for (std::size_t i = 0; i < entry.size(); ++i)
      out.push_back(base + "_s" + std::to_string(i));
  }
  return out;
}

void save_coefficients(const ScatteringCoefficients& coeffs, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open coefficient file for writing: " + path);

  const auto& bc = coeffs.bank_config();
  const auto& sc = coeffs.scatter_config();
  os.write("SKSC", 4);
  detail::write_u32(os, 1);
  detail::write_u32(os, static_cast<std::uint32_t>(bc.dim));
  detail::write_u32(os, static_cast<std::uint32_t>(bc.J));
  detail::write_u32(os, static_cast<std::uint32_t>(bc.K));
  detail::write_u32(os, static_cast<std::uint32_t>(bc.height));
  detail::write_u32(os, static_cast<std::uint32_t>(bc.width));
  detail::write_u32(os, static_cast<std::uint32_t>(sc.max_order));
  detail::write_u32(os, static_cast<std::uint32_t>(sc.oversampling));
  detail::write_u32(os, static_cast<std::uint32_t>(sc.rho));
  detail::write_u32(os, (sc.all_paths ? 1u : 0u) | (sc.internal_subsampling ? 2u : 0u));
  detail::write_u32(os, static_cast<std::uint32_t>(coeffs.output_subsample()));
  detail::write_u32(os, static_cast<std::uint32_t>(coeffs.entries().size()));

  for (const auto& [p, entry] : coeffs.entries()) {
    detail::write_u32(os, static_cast<std::uint32_t>(p.order()));
    for (const auto& [j, k] : p.lambdas) {
      detail::write_u32(os, static_cast<std::uint32_t>(j));
      detail::write_u32(os, static_cast<std::uint32_t>(k));
    }
  }
  for (const auto& [p, entry] : coeffs.entries()) {
    detail::write_u32(os, static_cast<std::uint32_t>(entry.height()));
    detail::write_u32(os, static_cast<std::uint32_t>(entry.width()));
    for (const Complex& v : entry.values()) detail::write_f64(os, v.real());
  }
  if (!os) throw IoError("failed writing coefficient file: " + path);
}

ScatteringCoefficients load_coefficients(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open coefficient file: " + path);
  char magic[4];
  if (!is.read(magic, 4)) throw IoError("truncated coefficient file: " + path);
  if (std::string(magic, 4) != "SKSC") {
    std::ostringstream msg;
    msg << "bad coefficient magic in " << path << ": bytes";
    for (int i = 0; i < 4; ++i)
      msg << " 0x" << std::hex << (static_cast<unsigned>(magic[i]) & 0xff);
    throw FormatError(msg.str());
  }
  if (detail::read_u32(is, "version") != 1)
    throw FormatError("unsupported coefficient container version");

  BankConfig bc;
  ScatterConfig sc;
  bc.dim = static_cast<int>(detail::read_u32(is, "dim"));
  bc.J = static_cast<int>(detail::read_u32(is, "J"));
  bc.K = static_cast<int>(detail::read_u32(is, "K"));
  bc.height = detail::read_u32(is, "height");
  bc.width = detail::read_u32(is, "width");
  sc.max_order = static_cast<int>(detail::read_u32(is, "max order"));
  sc.oversampling = static_cast<int>(detail::read_u32(is, "oversampling"));
  sc.rho = static_cast<Rho>(detail::read_u32(is, "rho"));
  const std::uint32_t flags = detail::read_u32(is, "flags");
  sc.all_paths = flags & 1u;
  sc.internal_subsampling = flags & 2u;
  const std::uint32_t output_subsample = detail::read_u32(is, "output subsample");
  const std::uint32_t count = detail::read_u32(is, "path count");

  std::vector<PathIndex> paths(count);
  for (auto& p : paths) {
    const std::uint32_t order = detail::read_u32(is, "path order");
    for (std::uint32_t i = 0; i < order; ++i) {
      const int j = static_cast<int>(detail::read_u32(is, "path j"));
      const int k = static_cast<int>(detail::read_u32(is, "path k"));
      p.lambdas.emplace_back(j, k);
    }
  }
  ScatteringCoefficients out(bc, sc, output_subsample);
  for (auto& p : paths) {
    const std::uint32_t h = detail::read_u32(is, "entry height");
    const std::uint32_t w = detail::read_u32(is, "entry width");
    std::vector<double> values(static_cast<std::size_t>(h) * w);
    for (double& v : values) v = detail::read_f64(is, "entry value");
    Signal entry = bc.dim == 1 ? Signal::real_1d(values) : Signal::real_2d(values, h, w);
    out.add(std::move(p), std::move(entry));
  }
  out.sort_canonical();
  return out;
}

void write_coefficients_csv(const ScatteringCoefficients& coeffs, std::ostream& os) {
  const std::vector<std::string> names = feature_column_names(coeffs);
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << "\n";
  const std::vector<double> features = feature_vector(coeffs);
  os.precision(17);
  for (std::size_t i = 0; i < features.size(); ++i) os << (i ? "," : "") << features[i];
  os << "\n";
}

}  // namespace scatterkit
