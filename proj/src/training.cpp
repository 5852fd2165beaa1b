// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "snre/enhance.hpp"
#include "snre/errors.hpp"
#include "snre/noise_tracker.hpp"
#include "snre/wav.hpp"

namespace snre {

Mixture mix(std::span<const double> speech, std::span<const double> noise,
            double snr_db, double peak_db, Rng& rng, const MixOptions& options) {
  if (speech.empty()) throw EmptyInputError("mix: empty speech signal");
  if (!std::isfinite(snr_db)) throw DomainError("mix: snr_db must be finite");
  if (peak_db > 0.0) {
    throw DomainError("mix: peak_db must be <= 0 dBFS, got " + std::to_string(peak_db));
  }

  double peak = 0.0;
  for (double s : speech) peak = std::max(peak, std::abs(s));
  if (peak <= 0.0) throw DegenerateInputError("mix: speech signal is silent");

  const std::size_t sentence_len = speech.size();
  const std::size_t pad =
      static_cast<std::size_t>(std::llround(options.noise_pad_fraction *
                                            static_cast<double>(sentence_len)));
  const std::size_t total = options.lead_samples + sentence_len + pad;
  if (noise.size() < total) {
    throw CorpusError("mix: noise too short (" + std::to_string(noise.size()) +
                      " samples, need " + std::to_string(total) + ")");
  }
  const std::size_t offset = rng.below(noise.size() - total + 1);

  const double speech_gain = std::pow(10.0, peak_db / 20.0) / peak;
  double speech_energy = 0.0;
  for (double s : speech) speech_energy += speech_gain * s * speech_gain * s;

  double noise_energy = 0.0;
  for (std::size_t i = 0; i < sentence_len; ++i) {
    const double n = noise[offset + options.lead_samples + i];
    noise_energy += n * n;
  }
  if (noise_energy <= 0.0) {
    throw DegenerateInputError("mix: noise segment has zero energy");
  }
  const double noise_gain =
      std::sqrt(speech_energy / (noise_energy * std::pow(10.0, snr_db / 10.0)));

  Mixture out;
  out.sentence_begin = options.lead_samples;
  out.sentence_len = sentence_len;
  out.speech_gain = speech_gain;
  out.noise_gain = noise_gain;
  out.clean.assign(total, 0.0);
  out.noise.resize(total);
  out.noisy.resize(total);
  for (std::size_t i = 0; i < sentence_len; ++i) {
    out.clean[options.lead_samples + i] = speech_gain * speech[i];
  }
  for (std::size_t i = 0; i < total; ++i) {
    out.noise[i] = noise_gain * noise[offset + i];
    out.noisy[i] = out.clean[i] + out.noise[i];
  }
  return out;
}

std::vector<std::vector<double>> irm_targets(const Spectrogram& clean,
                                             const Spectrogram& noise) {
  if (clean.n_frames() != noise.n_frames() || clean.n_bins() != noise.n_bins()) {
    throw ShapeError("irm_targets: spectrogram geometry mismatch");
  }
  std::vector<std::vector<double>> targets(clean.n_frames());
  for (int ell = 0; ell < clean.n_frames(); ++ell) {
    auto& row = targets[ell];
    row.resize(clean.n_bins());
    for (int k = 0; k < clean.n_bins(); ++k) {
      const double s = std::norm(clean.frames[ell][k]);
      const double n = std::norm(noise.frames[ell][k]);
      row[k] = (s + n) > 0.0 ? s / (s + n) : 0.0;
    }
  }
  return targets;
}

TrainingExample make_training_example(std::span<const double> speech,
                                      std::span<const double> noise, double snr_db,
                                      double peak_db, std::uint64_t seed,
                                      FeatureKind kind, const DatasetConfig& config) {
  config.stft.validate();
  const std::size_t init_len = static_cast<std::size_t>(
      std::llround(config.init_seconds * config.stft.sample_rate_hz));

  Rng rng(seed);
  MixOptions options;
  options.lead_samples = init_len;
  const Mixture m = mix(speech, noise, snr_db, peak_db, rng, options);

  const Spectrogram noisy_spec = analyze(m.noisy, config.stft);
  const Spectrogram clean_spec = analyze(m.clean, config.stft);
  const Spectrogram noise_spec = analyze(m.noise, config.stft);

  const int n_init = std::min<int>(config.tracker.init_frames, noisy_spec.n_frames());
  std::vector<std::vector<double>> init_frames;
  for (int ell = 0; ell < n_init; ++ell) {
    init_frames.push_back(periodogram(noisy_spec.frames[ell]));
  }
  NoiseTrackState tracker = init_noise_tracker(init_frames, config.tracker);
  TcsState tcs;
  FeatureStream stream = extract_features(noisy_spec, kind, tracker, tcs,
                                          config.tracker, config.tcs, config.context);
  std::vector<std::vector<double>> targets = irm_targets(clean_spec, noise_spec);

  // Frames starting inside the warm-up span are dropped from the outputs.
  const std::size_t hop = static_cast<std::size_t>(config.stft.hop);
  const std::size_t drop =
      std::min<std::size_t>((init_len + hop - 1) / hop, stream.vectors.size());

  TrainingExample example;
  example.features.kind = kind;
  example.features.vectors.assign(stream.vectors.begin() + drop, stream.vectors.end());
  example.targets.assign(targets.begin() + drop, targets.end());
  return example;
}

namespace {

int worker_count(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SNR_ENHANCE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(std::min<std::size_t>(n, jobs));
}

}  // namespace

std::vector<TrainingExample> build_dataset(std::span<const MixtureSpec> corpus,
                                           FeatureKind kind,
                                           const DatasetConfig& config) {
  if (corpus.empty()) throw EmptyInputError("build_dataset: empty corpus");

  // Load every referenced file once.
  std::map<std::string, std::vector<double>> audio;
  for (const MixtureSpec& spec : corpus) {
    for (const std::string& path : {spec.speech_path, spec.noise_path}) {
      if (audio.count(path)) continue;
      WavFile wav = read_wav(path);
      if (wav.sample_rate != config.stft.sample_rate_hz) {
        throw FormatError("build_dataset: " + path + " is sampled at " +
                          std::to_string(wav.sample_rate) + " Hz, expected " +
                          std::to_string(config.stft.sample_rate_hz));
      }
      audio.emplace(path, std::move(wav.samples));
    }
  }

  std::vector<TrainingExample> dataset(corpus.size());
  std::vector<std::exception_ptr> failures(corpus.size());
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= corpus.size()) return;
      try {
        const MixtureSpec& spec = corpus[i];
        dataset[i] = make_training_example(audio.at(spec.speech_path),
                                           audio.at(spec.noise_path), spec.snr_db,
                                           spec.peak_db, spec.seed, kind, config);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const int n_workers = worker_count(corpus.size());
  if (n_workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return dataset;
}

namespace {

MixtureSpec parse_manifest_line(const std::string& line, const std::string& origin,
                                int line_no) {
  MixtureSpec spec;
  bool have_speech = false, have_noise = false, have_snr = false, have_peak = false,
       have_seed = false;
  std::istringstream tokens(line);
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw CorpusError(origin + ":" + std::to_string(line_no) +
                        ": expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "speech") {
        spec.speech_path = value;
        have_speech = true;
      } else if (key == "noise") {
        spec.noise_path = value;
        have_noise = true;
      } else if (key == "snr") {
        spec.snr_db = std::stod(value);
        have_snr = true;
      } else if (key == "peak") {
        spec.peak_db = std::stod(value);
        have_peak = true;
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
        have_seed = true;
      } else {
        throw CorpusError(origin + ":" + std::to_string(line_no) + ": unknown key '" +
                          key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw CorpusError(origin + ":" + std::to_string(line_no) + ": bad value for '" +
                        key + "': '" + value + "'");
    } catch (const std::out_of_range&) {
      throw CorpusError(origin + ":" + std::to_string(line_no) + ": value out of range for '" +
                        key + "': '" + value + "'");
    }
  }
  if (!have_speech || !have_noise || !have_snr || !have_peak || !have_seed) {
    throw CorpusError(origin + ":" + std::to_string(line_no) +
                      ": missing keys (need speech, noise, snr, peak, seed)");
  }
  return spec;
}

}  // namespace

std::vector<MixtureSpec> parse_manifest_text(const std::string& text,
                                             const std::string& origin) {
  std::vector<MixtureSpec> corpus;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    corpus.push_back(parse_manifest_line(line, origin, line_no));
  }
  return corpus;
}

std::vector<MixtureSpec> parse_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("parse_manifest: cannot open " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_manifest_text(buffer.str(), path);
}

bool should_stop_early(std::span<const double> val_history, int window,
                       double min_rel_improvement) {
  const int n = static_cast<int>(val_history.size());
  if (n <= window) return false;
  double best_ref = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n - window; ++i) best_ref = std::min(best_ref, val_history[i]);
  double best_now = best_ref;
  for (int i = n - window; i < n; ++i) best_now = std::min(best_now, val_history[i]);
  if (best_ref <= 0.0) return true;  // nothing left to improve on
  return best_now >= best_ref * (1.0 - min_rel_improvement);
}

namespace {

struct FlatSet {
  Eigen::MatrixXd inputs;   // dim x frames
  Eigen::MatrixXd targets;  // n_bins x frames
};

FlatSet flatten(const std::vector<TrainingExample>& dataset,
                std::span<const std::size_t> example_ids, int in_dim, int out_dim) {
  std::size_t frames = 0;
  for (std::size_t id : example_ids) frames += dataset[id].features.vectors.size();
  FlatSet set;
  set.inputs.resize(in_dim, static_cast<Eigen::Index>(frames));
  set.targets.resize(out_dim, static_cast<Eigen::Index>(frames));
  Eigen::Index col = 0;
  for (std::size_t id : example_ids) {
    const TrainingExample& ex = dataset[id];
    for (std::size_t ell = 0; ell < ex.features.vectors.size(); ++ell, ++col) {
      const auto& f = ex.features.vectors[ell];
      const auto& t = ex.targets[ell];
      if (static_cast<int>(f.size()) != in_dim || static_cast<int>(t.size()) != out_dim) {
        throw ShapeError("train: example frame dims do not match the network dims");
      }
      for (int r = 0; r < in_dim; ++r) set.inputs(r, col) = f[r];
      for (int r = 0; r < out_dim; ++r) set.targets(r, col) = t[r];
    }
  }
  return set;
}

double validation_loss(const MlpModel& model, const FlatSet& val, double eps) {
  constexpr Eigen::Index kChunk = 1024;
  double total = 0.0;
  for (Eigen::Index start = 0; start < val.inputs.cols(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, val.inputs.cols() - start);
    const Eigen::MatrixXd y = forward_batch(model, val.inputs.middleCols(start, n));
    total += irm_log_loss_batch(y, val.targets.middleCols(start, n), eps) *
             static_cast<double>(n);
  }
  return total / static_cast<double>(val.inputs.cols());
}

}  // namespace

TrainResult train(const std::vector<TrainingExample>& dataset,
                  std::span<const int> dims, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw EmptyInputError("train: dataset is empty");
  if (dims.size() < 2) throw ConfigError("train: need at least input and output dims");

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset[i].features.vectors.empty()) usable.push_back(i);
  }
  if (usable.size() < 2) {
    throw ConfigError("train: need at least 2 non-empty examples for a validation split");
  }
  const int in_dim = dims[0];
  const int out_dim = dims[dims.size() - 1];

  Rng master(config.rng_seed);
  const std::uint64_t split_seed = master.next_u64();
  const std::uint64_t init_seed = master.next_u64();
  const std::uint64_t shuffle_seed = master.next_u64();

  // Validation split at utterance granularity: whole examples, never frames.
  Rng split_rng(split_seed);
  split_rng.shuffle(usable);
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(config.validation_fraction * static_cast<double>(usable.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, usable.size() - 1);
  const std::vector<std::size_t> val_ids(usable.begin(), usable.begin() + n_val);
  const std::vector<std::size_t> train_ids(usable.begin() + n_val, usable.end());

  const FlatSet train_set = flatten(dataset, train_ids, in_dim, out_dim);
  const FlatSet val_set = flatten(dataset, val_ids, in_dim, out_dim);

  MlpModel model = glorot_init(dims, init_seed);
  AdaGradState opt = make_adagrad_state(model, config.learning_rate);

  const Eigen::Index n_frames = train_set.inputs.cols();
  std::vector<Eigen::Index> order(n_frames);
  for (Eigen::Index i = 0; i < n_frames; ++i) order[i] = i;
  Rng shuffle_rng(shuffle_seed);

  TrainResult result;
  result.initial_val_loss = validation_loss(model, val_set, config.loss_eps);
  std::vector<double> val_history;
  double best_val = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd batch_in(in_dim, config.batch_size);
  Eigen::MatrixXd batch_tgt(out_dim, config.batch_size);
  for (int epoch = 0;; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    Eigen::Index done = 0;
    while (done < n_frames) {
      const Eigen::Index n = std::min<Eigen::Index>(config.batch_size, n_frames - done);
      for (Eigen::Index j = 0; j < n; ++j) {
        batch_in.col(j) = train_set.inputs.col(order[done + j]);
        batch_tgt.col(j) = train_set.targets.col(order[done + j]);
      }
      double batch_loss = 0.0;
      const Gradients grads = backward(model, batch_in.leftCols(n),
                                       batch_tgt.leftCols(n), config.loss_eps,
                                       &batch_loss);
      adagrad_step(model, opt, grads);
      epoch_loss += batch_loss * static_cast<double>(n);
      done += n;
    }
    epoch_loss /= static_cast<double>(n_frames);
    const double val_loss = validation_loss(model, val_set, config.loss_eps);
    if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss)) {
      throw TrainingDivergedError("train: non-finite loss at epoch " +
                                      std::to_string(epoch),
                                  epoch);
    }
    result.history.push_back({epoch_loss, val_loss});
    val_history.push_back(val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      result.model = model;
      result.best_epoch = epoch;
    }
    if (should_stop_early(val_history, config.early_stop_window,
                          config.early_stop_rel_improvement)) {
      break;
    }
  }
  return result;
}

namespace {

std::vector<double> lowpass_fir(double cutoff_hz, int taps, int sample_rate_hz) {
  if (taps < 3 || taps % 2 == 0) {
    throw ConfigError("anchor_signal: FIR tap count must be odd and >= 3");
  }
  const int mid = (taps - 1) / 2;
  const double fc = cutoff_hz / sample_rate_hz;  // normalized (cycles/sample)
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int n = 0; n < taps; ++n) {
    const int m = n - mid;
    const double sinc = m == 0 ? 2.0 * fc
                               : std::sin(2.0 * M_PI * fc * m) / (M_PI * m);
    const double hamming = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / (taps - 1));
    h[n] = sinc * hamming;
    sum += h[n];
  }
  for (double& v : h) v /= sum;  // unity DC gain
  return h;
}

std::vector<double> convolve_same(std::span<const double> x, std::span<const double> h) {
  const int mid = static_cast<int>(h.size() - 1) / 2;
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const long j = static_cast<long>(n) + mid - static_cast<long>(k);
      if (j >= 0 && j < static_cast<long>(x.size())) acc += h[k] * x[j];
    }
    y[n] = acc;
  }
  return y;
}

}  // namespace

std::vector<double> anchor_signal(std::span<const double> speech,
                                  std::span<const double> noise, Rng& rng,
                                  const AnchorOptions& options) {
  options.stft.validate();
  const std::vector<double> fir =
      lowpass_fir(options.cutoff_hz, options.fir_taps, options.stft.sample_rate_hz);
  const std::vector<double> lp_speech = convolve_same(speech, fir);

  const Mixture m = mix(lp_speech, noise, options.snr_db, options.peak_db, rng);
  const Spectrogram noisy = analyze(m.noisy, options.stft);

  const int n_init = std::min<int>(options.tracker.init_frames, noisy.n_frames());
  std::vector<std::vector<double>> init_frames;
  for (int ell = 0; ell < n_init; ++ell) {
    init_frames.push_back(periodogram(noisy.frames[ell]));
  }
  NoiseTrackState tracker = init_noise_tracker(init_frames, options.tracker);

  Spectrogram enhanced;
  enhanced.config = noisy.config;
  enhanced.frames.resize(noisy.frames.size());
  std::vector<double> prev_clean_power;   // |S_hat|^2 of the previous frame
  std::vector<double> prev_noise_psd;
  for (int ell = 0; ell < noisy.n_frames(); ++ell) {
    const std::vector<double> power = periodogram(noisy.frames[ell]);
    const NoiseUpdate nu = update_noise_tracker(tracker, power, options.tracker);
    std::vector<double> gain(power.size());
    for (std::size_t k = 0; k < power.size(); ++k) {
      const double gamma = power[k] / nu.noise_psd[k];
      double xi = (1.0 - options.dd_smoothing) * std::max(gamma - 1.0, 0.0);
      if (ell > 0) {
        xi += options.dd_smoothing * prev_clean_power[k] / prev_noise_psd[k];
      }
      gain[k] = xi / (1.0 + xi);
    }
    enhanced.frames[ell] = apply_gain(gain, options.g_min, noisy.frames[ell]);
    prev_clean_power = periodogram(enhanced.frames[ell]);
    prev_noise_psd = nu.noise_psd;
  }
  return synthesize(enhanced);
}

}  // namespace snre
