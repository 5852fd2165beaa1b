// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snre/config_file.hpp"
#include "snre/enhance.hpp"
#include "snre/errors.hpp"
#include "snre/features.hpp"
#include "snre/metrics.hpp"
#include "snre/mlp.hpp"
#include "snre/training.hpp"
#include "snre/wav.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

constexpr const char* kKindChoices = "y, y+n, xi, gamma, xi+gamma";

snre::FeatureKind require_kind(const std::string& name) {
  const auto kind = snre::parse_feature_kind(name);
  if (!kind) {
    throw snre::ConfigError("unknown feature kind '" + name + "' (valid: " +
                            std::string(kKindChoices) + ")");
  }
  return *kind;
}

snre::WavFile read_checked_wav(const std::string& path, int expected_rate) {
  snre::WavFile wav = snre::read_wav(path);
  if (wav.sample_rate != expected_rate) {
    throw snre::FormatError(path + " is sampled at " + std::to_string(wav.sample_rate) +
                            " Hz, expected " + std::to_string(expected_rate));
  }
  return wav;
}

struct CommonOptions {
  std::string config_path;
  std::optional<double> g_min_db;
  std::optional<std::uint64_t> seed;
  std::string kind_name;
};

snre::ToolConfig resolve_config(const CommonOptions& opts) {
  snre::ToolConfig config;
  if (!opts.config_path.empty()) snre::apply_config_file(config, opts.config_path);
  if (opts.g_min_db) config.g_min_db = *opts.g_min_db;  // flags beat the file
  if (opts.seed) config.train.rng_seed = *opts.seed;
  config.finalize();
  return config;
}

int cmd_enhance(const std::string& in_path, const std::string& out_path,
                const std::string& mode, const std::string& model_path,
                const CommonOptions& opts) {
  const snre::ToolConfig config = resolve_config(opts);
  snre::EnhanceConfig enhance_config;
  enhance_config.stft = config.stft;
  enhance_config.tracker = config.tracker;
  enhance_config.tcs = config.tcs;
  enhance_config.g_min = config.g_min();

  snre::MlpModel model;
  if (mode == "ml") {
    if (model_path.empty()) {
      throw snre::ConfigError("--mode ml requires --model <path>");
    }
    model = snre::load_model(model_path);
    enhance_config.path = snre::EnhanceConfig::Path::kMl;
    enhance_config.model = &model;
    enhance_config.kind = require_kind(opts.kind_name);
  } else if (mode != "nonml") {
    throw snre::ConfigError("--mode must be 'nonml' or 'ml', got '" + mode + "'");
  }

  const snre::WavFile wav = read_checked_wav(in_path, config.stft.sample_rate_hz);
  const auto t0 = std::chrono::steady_clock::now();
  const snre::EnhanceResult result = snre::enhance(wav.samples, enhance_config);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  snre::write_wav(out_path, result.signal, wav.sample_rate, wav.format);
  std::printf("frames=%d seconds=%.3f\n", result.frames_processed, elapsed.count());
  return kExitOk;
}

int cmd_train(const std::string& manifest_path, const std::string& model_path,
              const std::string& hidden_csv, const std::string& history_path,
              const CommonOptions& opts) {
  const snre::ToolConfig config = resolve_config(opts);
  const snre::FeatureKind kind = require_kind(opts.kind_name);

  std::vector<int> dims;
  dims.push_back(snre::feature_base_dim(kind, config.stft.n_bins()) *
                 (config.context + 1));
  {
    std::stringstream ss(hidden_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        dims.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw snre::ConfigError("--hidden expects a comma-separated list of ints, got '" +
                                hidden_csv + "'");
      }
    }
  }
  dims.push_back(config.stft.n_bins());

  const std::vector<snre::MixtureSpec> corpus = snre::parse_manifest(manifest_path);
  snre::DatasetConfig dataset_config;
  dataset_config.stft = config.stft;
  dataset_config.tracker = config.tracker;
  dataset_config.tcs = config.tcs;
  dataset_config.init_seconds = config.init_seconds;
  dataset_config.context = config.context;
  const std::vector<snre::TrainingExample> dataset =
      snre::build_dataset(corpus, kind, dataset_config);

  const snre::TrainResult result = snre::train(dataset, dims, config.train);
  snre::save_model(result.model, model_path);

  const std::string history_file =
      history_path.empty() ? model_path + ".history" : history_path;
  std::ofstream history(history_file);
  if (!history) throw snre::IoError("cannot open history file " + history_file);
  for (std::size_t epoch = 0; epoch < result.history.size(); ++epoch) {
    history << epoch << '\t' << result.history[epoch].train_loss << '\t'
            << result.history[epoch].val_loss << '\n';
  }
  std::printf("epochs=%zu best_epoch=%d best_val_J=%.6f model=%s\n",
              result.history.size(), result.best_epoch,
              result.history[result.best_epoch].val_loss, model_path.c_str());
  return kExitOk;
}

int cmd_features(const std::string& in_path, const std::string& out_path,
                 const CommonOptions& opts) {
  const snre::ToolConfig config = resolve_config(opts);
  const snre::FeatureKind kind = require_kind(opts.kind_name);
  const snre::WavFile wav = read_checked_wav(in_path, config.stft.sample_rate_hz);

  const snre::Spectrogram spec = snre::analyze(wav.samples, config.stft);
  const int n_init = std::min(config.tracker.init_frames, spec.n_frames());
  std::vector<std::vector<double>> init_frames;
  for (int ell = 0; ell < n_init; ++ell) {
    init_frames.push_back(snre::periodogram(spec.frames[ell]));
  }
  snre::NoiseTrackState tracker = snre::init_noise_tracker(init_frames, config.tracker);
  snre::TcsState tcs;
  const snre::FeatureStream stream = snre::extract_features(
      spec, kind, tracker, tcs, config.tracker, config.tcs, config.context);
  snre::write_feature_dump(stream, out_path);
  std::printf("frames=%d dim=%d\n", stream.n_frames(), stream.dim());
  return kExitOk;
}

int cmd_eval(const std::string& clean_path, const std::string& test_path,
             const CommonOptions& opts) {
  const snre::ToolConfig config = resolve_config(opts);
  const snre::WavFile clean = read_checked_wav(clean_path, config.stft.sample_rate_hz);
  const snre::WavFile test = read_checked_wav(test_path, config.stft.sample_rate_hz);
  if (clean.samples.size() != test.samples.size()) {
    throw snre::ShapeError("signals differ in length: " + clean_path + " has " +
                           std::to_string(clean.samples.size()) + " samples, " +
                           test_path + " has " + std::to_string(test.samples.size()));
  }
  const snre::MetricReport report =
      snre::evaluate_signals(clean.samples, test.samples, config.stft);
  std::printf("segsnr_db=%.4f lsd_db=%.4f\n", report.seg_snr_db, report.lsd_db);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-channel speech enhancement: SPP noise tracking, cepstrally "
               "smoothed Wiener filtering, and an IRM mask estimator on "
               "SNR-normalized features"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string in_path, out_path, mode = "nonml", model_path, manifest_path;
  std::string hidden_csv = "1024,1024,1024", history_path;
  opts.kind_name = "xi+gamma";

  auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "flat key = value config file");
    cmd->add_option("--gmin-db", opts.g_min_db, "minimum gain in dB (negative)");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--kind", opts.kind_name,
                    std::string("feature kind: ") + kKindChoices);
  };

  CLI::App* enhance = app.add_subcommand("enhance", "denoise a mono 16 kHz WAV file");
  enhance->add_option("input", in_path, "noisy input WAV")->required();
  enhance->add_option("output", out_path, "enhanced output WAV")->required();
  enhance->add_option("--mode", mode, "nonml (statistical) or ml (mask network)");
  enhance->add_option("--model", model_path, "model file for --mode ml");
  add_common(enhance);

  CLI::App* train = app.add_subcommand("train", "train a mask estimator from a manifest");
  train->add_option("manifest", manifest_path, "corpus manifest")->required();
  train->add_option("model", out_path, "output model file")->required();
  train->add_option("--hidden", hidden_csv, "hidden layer sizes, comma separated");
  train->add_option("--history", history_path, "loss history file (default <model>.history)");
  add_common(train);

  CLI::App* features = app.add_subcommand("features", "dump feature vectors for a WAV");
  features->add_option("input", in_path, "input WAV")->required();
  features->add_option("output", out_path, "output feature dump")->required();
  add_common(features);

  CLI::App* eval = app.add_subcommand("eval", "segmental SNR / LSD between two WAVs");
  eval->add_option("clean", in_path, "reference WAV")->required();
  eval->add_option("test", out_path, "signal under test WAV")->required();
  add_common(eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(enhance)) {
      return cmd_enhance(in_path, out_path, mode, model_path, opts);
    }
    if (app.got_subcommand(train)) {
      return cmd_train(manifest_path, out_path, hidden_csv, history_path, opts);
    }
    if (app.got_subcommand(features)) {
      return cmd_features(in_path, out_path, opts);
    }
    return cmd_eval(in_path, out_path, opts);
  } catch (const snre::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const snre::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const snre::CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const snre::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
