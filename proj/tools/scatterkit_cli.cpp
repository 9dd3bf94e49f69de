// scatterkit command-line tool: filter-bank construction, time-frequency
// analysis, scattering feature extraction, linear classification and the
// invariance/stability experiments. Every subcommand echoes its resolved
// configuration as JSON on stdout and writes its artifacts under --out.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numerical
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scatterkit/dataset.hpp"
#include "scatterkit/errors.hpp"
#include "scatterkit/filterbank.hpp"
#include "scatterkit/linear.hpp"
#include "scatterkit/pipeline.hpp"
#include "scatterkit/scattering.hpp"
#include "scatterkit/signal.hpp"
#include "scatterkit/stability.hpp"
#include "scatterkit/synth.hpp"
#include "scatterkit/timefreq.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scatterkit;

namespace {

// Flat config-file grammar: one `key = value` per line, '#' starts a comment.
// Keys name long options without the leading dashes; command-line flags win.
std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
  };
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line is not `key = value`: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw FormatError("config line has an empty key: " + line);
    pairs.emplace_back(key, value);
  }
  return pairs;
}

// Replaces `--config FILE` with the file's pairs as ordinary options,
// skipping keys the command line already carries.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t config_at = args.size();
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidInputError("--config requires a file path");
      config_at = i;
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_at = i;
      path = args[i].substr(std::string("--config=").size());
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (config_at == args.size()) return args;

  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };

  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config_pairs(path)) {
    if (given(key)) continue;
    std::string lower = value;
    for (char& ch : lower) ch = static_cast<char>(std::tolower(ch));
    if (lower == "true" || lower == "yes" || lower == "on") {
      injected.push_back("--" + key);
    } else if (lower == "false" || lower == "no" || lower == "off") {
      // omitted: flags default to off
    } else {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  args.insert(args.begin() + static_cast<long>(config_at), injected.begin(), injected.end());
  return args;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

Signal signal_from_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open signal CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows[0].size())
      throw FormatError("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("empty signal CSV: " + path);
  if (rows.size() == 1) return Signal::real_1d(rows[0]);
  std::vector<double> flat;
  for (const auto& r : rows)
    for (double v : r) flat.push_back(v);
  return Signal::real_2d(flat, rows.size(), rows[0].size());
}

struct SyntheticSpec {
  std::string kind = "";  // texture | noise | smooth-noise | gaussian | tone | chirp
  std::size_t size = 32;
  std::uint64_t seed = 1;
  double param = 4.0;  // knee / cutoff / sigma / bin, depending on kind
};

Signal make_synthetic(const SyntheticSpec& spec, int dim) {
  if (spec.kind == "texture") {
    if (dim == 1) throw InvalidInputError("texture synthetic is 2D");
    return synth::texture_2d(spec.size, spec.size, spec.param, spec.seed);
  }
  if (spec.kind == "noise")
    return dim == 2 ? synth::white_noise_2d(spec.size, spec.size, spec.seed)
                    : synth::white_noise_1d(spec.size, spec.seed);
  if (spec.kind == "smooth-noise")
    return dim == 2 ? synth::smooth_noise_2d(spec.size, spec.size, spec.param, spec.seed)
                    : synth::smooth_noise_1d(spec.size, spec.param, spec.seed);
  if (spec.kind == "gaussian")
    return synth::gaussian_bump_1d(spec.size, spec.param,
                                   static_cast<double>(spec.size) / 2.0);
  if (spec.kind == "tone") return synth::tone_1d(spec.size, spec.param);
  if (spec.kind == "chirp") return synth::chirp_1d(spec.size, 2.0, spec.param);
  throw InvalidInputError("unknown synthetic signal kind: " + spec.kind);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << content;
}

void echo_config(const json& j) { std::cout << j.dump(2) << std::endl; }

void write_matrix_csv(const fs::path& path, const std::vector<std::vector<double>>& rows,
                      const std::string& header) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os.precision(17);
  if (!header.empty()) os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

Rho rho_from_name(const std::string& name) {
  if (name == "modulus") return Rho::Modulus;
  if (name == "rectifier") return Rho::Rectifier;
  if (name == "sigmoid") return Rho::Sigmoid;
  throw InvalidInputError("unknown rho: " + name);
}

// ---------------------------------------------------------------------------

struct BankFlags {
  int J = 3, K = 8, dim = 2;
  std::size_t size = 32;
  double xi = 2.356194490192345, sigma = 0.65, slant = 0.75;
  std::string norm = "L1";
  void attach(CLI::App* cmd) {
    cmd->add_option("--J", J, "max scale index (invariance scale 2^J)");
    cmd->add_option("--K", K, "wavelets per scale");
    cmd->add_option("--dim", dim, "1 or 2");
    cmd->add_option("--size", size, "grid samples per dimension");
    cmd->add_option("--xi", xi, "mother center frequency (rad/sample)");
    cmd->add_option("--sigma", sigma, "mother envelope width at scale 0");
    cmd->add_option("--slant", slant, "2D tangential envelope compression");
    cmd->add_option("--norm", norm, "L1 or L2")->check(CLI::IsMember({"L1", "L2"}));
  }
  BankConfig config() const {
    BankConfig c;
    c.J = J;
    c.K = K;
    c.dim = dim;
    c.height = dim == 2 ? size : 1;
    c.width = size;
    c.xi = xi;
    c.sigma = sigma;
    c.slant = slant;
    c.normalization = norm == "L2" ? Normalization::L2 : Normalization::L1;
    return c;
  }
  json to_json() const {
    return json{{"J", J},     {"K", K},         {"dim", dim},   {"size", size},
                {"xi", xi},   {"sigma", sigma}, {"slant", slant}, {"norm", norm}};
  }
};

struct ScatterFlags {
  int max_order = 2, oversampling = 0;
  std::string rho = "modulus";
  bool all_paths = false, internal_subsampling = false;
  void attach(CLI::App* cmd) {
    cmd->add_option("--max-order", max_order, "scattering order m");
    cmd->add_option("--oversampling", oversampling, "halves output subsampling per unit");
    cmd->add_option("--rho", rho, "modulus | rectifier | sigmoid")
        ->check(CLI::IsMember({"modulus", "rectifier", "sigmoid"}));
    cmd->add_flag("--all-paths", all_paths, "disable frequency-decreasing pruning");
    cmd->add_flag("--internal-subsampling", internal_subsampling,
                  "decimate intermediates (faster, approximate)");
  }
  ScatterConfig config() const {
    ScatterConfig c;
    c.max_order = max_order;
    c.oversampling = oversampling;
    c.rho = rho_from_name(rho);
    c.all_paths = all_paths;
    c.internal_subsampling = internal_subsampling;
    return c;
  }
  json to_json() const {
    return json{{"max_order", max_order},
                {"oversampling", oversampling},
                {"rho", rho},
                {"all_paths", all_paths},
                {"internal_subsampling", internal_subsampling}};
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"wavelet scattering toolkit"};
  app.require_subcommand(1);

  std::string out_dir = ".";

  // --- build-bank ---------------------------------------------------------
  auto* cmd_bank = app.add_subcommand("build-bank", "construct and save a Morlet filter bank");
  cmd_bank->set_config("--config");
  BankFlags bank_flags;
  bank_flags.attach(cmd_bank);
  cmd_bank->add_option("--out", out_dir, "output directory");
  cmd_bank->callback([&] {
    fs::create_directories(out_dir);
    FilterBank bank = build_bank(bank_flags.config());
    const fs::path path = fs::path(out_dir) / "bank.skfb";
    save_bank(bank, path.string());
    json j{{"command", "build-bank"},
           {"bank", bank_flags.to_json()},
           {"out", path.string()},
           {"frame_bounds", {bank.frame_a, bank.frame_b}},
           {"warnings", bank.warnings}};
    echo_config(j);
  });

  // --- timefreq ------------------------------------------------------------
  auto* cmd_tf = app.add_subcommand("timefreq", "windowed Fourier / wavelet analysis to CSV");
  cmd_tf->set_config("--config");
  std::string tf_op = "wft", tf_input;
  SyntheticSpec tf_synth;
  std::size_t tf_window = 64, tf_hop = 32;
  std::string tf_scales = "1,2,4,8";
  double tf_p = 1.0, tf_mother_xi = 2.356194490192345, tf_mother_sigma = 2.0;
  cmd_tf->add_option("--op", tf_op, "wft | cwt")->check(CLI::IsMember({"wft", "cwt"}));
  cmd_tf->add_option("--input", tf_input, "signal CSV (one row per line)");
  cmd_tf->add_option("--synthetic", tf_synth.kind, "generate the input instead");
  cmd_tf->add_option("--length", tf_synth.size, "synthetic length");
  cmd_tf->add_option("--seed", tf_synth.seed, "synthetic seed");
  cmd_tf->add_option("--param", tf_synth.param, "synthetic parameter");
  cmd_tf->add_option("--window-length", tf_window, "WFT window length (Hann)");
  cmd_tf->add_option("--hop", tf_hop, "WFT hop (must divide the length)");
  cmd_tf->add_option("--scales", tf_scales, "CWT scales, comma separated");
  cmd_tf->add_option("--p", tf_p, "CWT dilation exponent");
  cmd_tf->add_option("--mother-xi", tf_mother_xi, "CWT mother center frequency");
  cmd_tf->add_option("--mother-sigma", tf_mother_sigma, "CWT mother envelope width");
  cmd_tf->add_option("--out", out_dir, "output directory");
  cmd_tf->callback([&] {
    fs::create_directories(out_dir);
    Signal x = tf_input.empty() ? make_synthetic(tf_synth, 1) : signal_from_csv(tf_input);
    json j{{"command", "timefreq"}, {"op", tf_op}, {"out", out_dir}};
    if (!tf_input.empty()) j["input"] = tf_input;

    if (tf_op == "wft") {
      TimeFreqMap map = windowed_fourier(x, synth::hann_window(tf_window), tf_hop);
      std::vector<std::vector<double>> mag(map.frames, std::vector<double>(map.bins));
      for (std::size_t m = 0; m < map.frames; ++m)
        for (std::size_t b = 0; b < map.bins; ++b) mag[m][b] = std::abs(map.at(m, b));
      write_matrix_csv(fs::path(out_dir) / "wft_magnitude.csv", mag, "");
      j["window_length"] = tf_window;
      j["hop"] = tf_hop;
      j["frames"] = map.frames;
    } else {
      const std::vector<double> scales = parse_list(tf_scales);
      Signal mother =
          zero_mean_correct(synth::morlet_mother_1d(x.size(), tf_mother_xi, tf_mother_sigma));
      ScaleTimeMap map = cwt(x, mother, scales, tf_p);
      std::vector<std::vector<double>> mag(map.rows, std::vector<double>(map.cols));
      for (std::size_t s = 0; s < map.rows; ++s)
        for (std::size_t t = 0; t < map.cols; ++t) mag[s][t] = std::abs(map.at(s, t));
      write_matrix_csv(fs::path(out_dir) / "cwt_magnitude.csv", mag, "");
      j["scales"] = scales;
      j["p"] = tf_p;
    }
    echo_config(j);
  });

  // --- scatter ---------------------------------------------------------------
  auto* cmd_scatter = app.add_subcommand("scatter", "scattering coefficients of one signal");
  cmd_scatter->set_config("--config");
  std::string sc_input, sc_bank_path;
  SyntheticSpec sc_synth;
  BankFlags sc_bank;
  ScatterFlags sc_flags;
  sc_bank.attach(cmd_scatter);
  sc_flags.attach(cmd_scatter);
  cmd_scatter->add_option("--input", sc_input, "signal CSV");
  cmd_scatter->add_option("--bank", sc_bank_path, "load a saved bank instead of building one");
  cmd_scatter->add_option("--synthetic", sc_synth.kind, "generate the input instead");
  cmd_scatter->add_option("--seed", sc_synth.seed, "synthetic seed");
  cmd_scatter->add_option("--param", sc_synth.param, "synthetic parameter");
  cmd_scatter->add_option("--out", out_dir, "output directory");
  cmd_scatter->callback([&] {
    fs::create_directories(out_dir);
    sc_synth.size = sc_bank.size;
    Signal x = sc_input.empty() ? make_synthetic(sc_synth, sc_bank.dim)
                                : signal_from_csv(sc_input);
    FilterBank bank;
    if (!sc_bank_path.empty()) {
      bank = load_bank(sc_bank_path);
    } else {
      BankConfig config = sc_bank.config();
      config.dim = x.dim();
      config.height = x.height();
      config.width = x.width();
      bank = build_bank(config);
    }
    ScatteringCoefficients coeffs = scatter(x, sc_flags.config(), bank);
    save_coefficients(coeffs, (fs::path(out_dir) / "coefficients.sksc").string());
    std::ofstream csv(fs::path(out_dir) / "coefficients.csv");
    write_coefficients_csv(coeffs, csv);
    json j{{"command", "scatter"},
           {"bank", sc_bank_path.empty() ? sc_bank.to_json() : json(sc_bank_path)},
           {"scatter", sc_flags.to_json()},
           {"paths", coeffs.entries().size()},
           {"feature_dim", feature_vector(coeffs).size()},
           {"out", out_dir}};
    echo_config(j);
  });

  // --- extract ---------------------------------------------------------------
  auto* cmd_extract = app.add_subcommand("extract", "scattering features for an IDX dataset");
  cmd_extract->set_config("--config");
  std::string ex_images, ex_labels, ex_bank_path;
  BankFlags ex_bank;
  ScatterFlags ex_flags;
  bool ex_csv = false;
  int ex_threads = 0;
  ex_bank.attach(cmd_extract);
  ex_flags.attach(cmd_extract);
  cmd_extract->add_option("--images", ex_images, "IDX image file")->required();
  cmd_extract->add_option("--labels", ex_labels, "IDX label file")->required();
  cmd_extract->add_option("--bank", ex_bank_path, "load a saved bank");
  cmd_extract->add_flag("--csv", ex_csv, "also write features.csv");
  cmd_extract->add_option("--threads", ex_threads, "extraction threads (0: auto)");
  cmd_extract->add_option("--out", out_dir, "output directory");
  cmd_extract->callback([&] {
    fs::create_directories(out_dir);
    LabeledDataset dataset = load_idx(ex_images, ex_labels);
    FilterBank bank;
    if (!ex_bank_path.empty()) {
      bank = load_bank(ex_bank_path);
    } else {
      BankConfig config = ex_bank.config();
      if (!dataset.images.empty()) {
        config.dim = 2;
        config.height = dataset.images[0].height();
        config.width = dataset.images[0].width();
      }
      bank = build_bank(config);
    }
    FeatureMatrix features = extract_features(dataset, ex_flags.config(), bank, ex_threads);
    save_feature_matrix(features, (fs::path(out_dir) / "features.skfm").string());
    if (ex_csv) {
      std::ofstream csv(fs::path(out_dir) / "features.csv");
      write_feature_csv(features, csv);
    }
    json j{{"command", "extract"},
           {"images", ex_images},
           {"labels", ex_labels},
           {"samples", features.rows},
           {"feature_dim", features.cols},
           {"feature_digest", features.feature_digest},
           {"images_digest", dataset.images_digest},
           {"scatter", ex_flags.to_json()},
           {"out", out_dir}};
    echo_config(j);
  });

  // --- train -------------------------------------------------------------------
  auto* cmd_train = app.add_subcommand("train", "ridge one-vs-rest classifier from features");
  cmd_train->set_config("--config");
  std::string tr_features;
  double tr_lambda = 1e-4;
  cmd_train->add_option("--features", tr_features, "features.skfm")->required();
  cmd_train->add_option("--lambda", tr_lambda, "ridge regularization");
  cmd_train->add_option("--out", out_dir, "output directory");
  cmd_train->callback([&] {
    fs::create_directories(out_dir);
    FeatureMatrix features = load_feature_matrix(tr_features);
    if (features.labels.empty())
      throw InvalidInputError("training requires a labeled feature file");
    LinearModel model = train_linear(features, features.labels, tr_lambda);
    save_model(model, (fs::path(out_dir) / "model.json").string());
    const double train_error = evaluate(model, features, features.labels);
    json j{{"command", "train"},  {"features", tr_features},
           {"lambda", tr_lambda}, {"classes", model.class_count},
           {"train_error", train_error}, {"out", out_dir}};
    write_text(fs::path(out_dir) / "train_metrics.json", j.dump(2) + "\n");
    echo_config(j);
  });

  // --- evaluate ------------------------------------------------------------------
  auto* cmd_eval = app.add_subcommand("evaluate", "0-1 error of a model on a feature file");
  cmd_eval->set_config("--config");
  std::string ev_features, ev_model;
  cmd_eval->add_option("--features", ev_features, "features.skfm")->required();
  cmd_eval->add_option("--model", ev_model, "model.json")->required();
  cmd_eval->add_option("--out", out_dir, "output directory");
  cmd_eval->callback([&] {
    fs::create_directories(out_dir);
    FeatureMatrix features = load_feature_matrix(ev_features);
    LinearModel model = load_model(ev_model);
    const double error = evaluate(model, features, features.labels);
    json j{{"command", "evaluate"},
           {"features", ev_features},
           {"model", ev_model},
           {"samples", features.rows},
           {"error_rate", error}};
    write_text(fs::path(out_dir) / "metrics.json", j.dump(2) + "\n");
    echo_config(j);
  });

  // --- stability -------------------------------------------------------------------
  auto* cmd_stab = app.add_subcommand("stability", "deformation-stability experiment");
  cmd_stab->set_config("--config");
  StabilityConfig stab;
  std::string stab_dilations = "0.005,0.01,0.015,0.02", stab_translations = "1,2",
              stab_maps = "fourier-modulus,scatter-m2";
  cmd_stab->add_option("--seed", stab.seed, "experiment seed");
  cmd_stab->add_option("--grid", stab.grid, "texture grid size");
  cmd_stab->add_option("--J", stab.J, "invariance scale index");
  cmd_stab->add_option("--K", stab.K, "wavelets per scale");
  cmd_stab->add_option("--max-order", stab.max_order, "scattering order");
  cmd_stab->add_option("--signals", stab.signal_count, "number of textures");
  cmd_stab->add_option("--random-deformations", stab.random_deformations,
                       "random smooth field count");
  cmd_stab->add_option("--min-grad", stab.min_grad, "smallest target sup|grad g|");
  cmd_stab->add_option("--max-grad", stab.max_grad, "largest target sup|grad g|");
  cmd_stab->add_option("--dilations", stab_dilations, "dilation eps list");
  cmd_stab->add_option("--translations", stab_translations, "translation magnitudes");
  cmd_stab->add_option("--feature-maps", stab_maps, "comma-separated feature maps");
  cmd_stab->add_option("--threads", stab.threads, "worker threads (0: auto)");
  cmd_stab->add_option("--out", out_dir, "output directory");
  cmd_stab->callback([&] {
    fs::create_directories(out_dir);
    stab.dilation_eps = parse_list(stab_dilations);
    stab.translation_magnitudes = parse_list(stab_translations);
    stab.feature_maps.clear();
    std::stringstream ss(stab_maps);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) stab.feature_maps.push_back(feature_map_from_name(name));

    StabilityReport report = stability_experiment(stab);
    std::ofstream csv(fs::path(out_dir) / "report.csv");
    report.write_csv(csv);
    write_text(fs::path(out_dir) / "summary.json", report.json_summary() + "\n");
    std::cout << report.json_summary() << std::endl;
  });

  // --- invariance ---------------------------------------------------------------------
  auto* cmd_inv = app.add_subcommand("invariance", "invariance profile over growing shifts");
  cmd_inv->set_config("--config");
  std::string inv_map = "scatter-m2", inv_shifts = "1,2,3,4,6,8";
  int inv_J = 5, inv_K = 8;
  std::size_t inv_grid = 32;
  std::uint64_t inv_seed = 1;
  double inv_threshold = 0.05;
  cmd_inv->add_option("--feature-map", inv_map, "raw | fourier-modulus | scatter-m1 | scatter-m2");
  cmd_inv->add_option("--J", inv_J, "invariance scale index");
  cmd_inv->add_option("--K", inv_K, "wavelets per scale");
  cmd_inv->add_option("--grid", inv_grid, "texture grid size");
  cmd_inv->add_option("--seed", inv_seed, "texture seed");
  cmd_inv->add_option("--shifts", inv_shifts, "shift magnitudes, comma separated");
  cmd_inv->add_option("--threshold", inv_threshold, "relative-change threshold");
  cmd_inv->add_option("--out", out_dir, "output directory");
  cmd_inv->callback([&] {
    fs::create_directories(out_dir);
    Signal x = synth::texture_2d(inv_grid, inv_grid, 4.0, inv_seed);
    FeatureExtractor features(feature_map_from_name(inv_map), inv_J, 2, inv_grid, inv_grid,
                              inv_K);
    std::vector<Deformation> family;
    for (double v : parse_list(inv_shifts))
      family.push_back(Deformation::translation_2d(inv_grid, inv_grid, 0.0, v));
    InvarianceProfile profile = invariance_profile(features, x, family, inv_threshold);

    std::vector<std::vector<double>> rows;
    for (const auto& pt : profile.rows) rows.push_back({pt.gnorm, pt.relative_change});
    write_matrix_csv(fs::path(out_dir) / "profile.csv", rows, "gnorm,relative_change");
    json j{{"command", "invariance"},     {"feature_map", inv_map},
           {"J", inv_J},                  {"grid", inv_grid},
           {"seed", inv_seed},            {"threshold", profile.threshold},
           {"effective_radius", profile.effective_radius},
           {"out", out_dir}};
    write_text(fs::path(out_dir) / "summary.json", j.dump(2) + "\n");
    echo_config(j);
  });

  // --- uncertainty ------------------------------------------------------------------------
  auto* cmd_unc = app.add_subcommand("uncertainty", "spread-product floor over a signal family");
  cmd_unc->set_config("--config");
  std::size_t unc_count = 50, unc_length = 512;
  std::uint64_t unc_seed = 1;
  cmd_unc->add_option("--count", unc_count, "random smooth signals in the family");
  cmd_unc->add_option("--length", unc_length, "signal length");
  cmd_unc->add_option("--seed", unc_seed, "family seed");
  cmd_unc->add_option("--out", out_dir, "output directory");
  cmd_unc->callback([&] {
    fs::create_directories(out_dir);
    std::vector<Signal> family;
    for (std::uint64_t i = 0; i < unc_count; ++i)
      family.push_back(synth::smooth_noise_1d(unc_length, 3.0 + static_cast<double>(i % 23),
                                              unc_seed * 1000 + i));
    family.push_back(synth::gaussian_bump_1d(unc_length, 16.0,
                                             static_cast<double>(unc_length) / 2.0));
    UncertaintyReport report = uncertainty_check(family);
    json j{{"command", "uncertainty"}, {"count", unc_count},
           {"length", unc_length},     {"seed", unc_seed},
           {"min_product", report.min_product},
           {"argmin", report.argmin},  {"baseline", report.baseline},
           {"violators", report.violators}, {"passed", report.passed}};
    write_text(fs::path(out_dir) / "uncertainty.json", j.dump(2) + "\n");
    echo_config(j);
    if (!report.passed)
      throw NumericError("uncertainty floor violated by " +
                         std::to_string(report.violators.size()) + " signal(s)");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  } catch (const InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << std::endl;
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << std::endl;
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
