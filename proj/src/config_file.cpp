// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/config_file.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "snre/errors.hpp"

namespace snre {

double ToolConfig::g_min() const { return std::pow(10.0, g_min_db / 20.0); }

void ToolConfig::finalize() {
  tcs.sample_rate_hz = stft.sample_rate_hz;
  stft.validate();
  tracker.validate();
  tcs.validate();
  train.validate();
  if (g_min_db >= 0.0) throw ConfigError("enhance.g_min_db must be negative");
  if (init_seconds < 0.0) throw ConfigError("dataset.init_seconds must be >= 0");
  if (context < 0) throw ConfigError("dataset.context must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void assign_double(double& dst, const std::string& value) { dst = std::stod(value); }
void assign_int(int& dst, const std::string& value) { dst = std::stoi(value); }

}  // namespace

void apply_config_file(ToolConfig& config, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);

  using Setter = std::function<void(ToolConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"stft.sample_rate_hz", [](ToolConfig& c, const std::string& v) { assign_int(c.stft.sample_rate_hz, v); }},
      {"stft.frame_len", [](ToolConfig& c, const std::string& v) { assign_int(c.stft.frame_len, v); }},
      {"stft.hop", [](ToolConfig& c, const std::string& v) { assign_int(c.stft.hop, v); }},
      {"tracker.xi_h1", [](ToolConfig& c, const std::string& v) { assign_double(c.tracker.xi_h1, v); }},
      {"tracker.beta", [](ToolConfig& c, const std::string& v) { assign_double(c.tracker.beta, v); }},
      {"tracker.spp_smooth", [](ToolConfig& c, const std::string& v) { assign_double(c.tracker.spp_smooth, v); }},
      {"tracker.spp_clamp", [](ToolConfig& c, const std::string& v) { assign_double(c.tracker.spp_clamp, v); }},
      {"tracker.init_frames", [](ToolConfig& c, const std::string& v) { assign_int(c.tracker.init_frames, v); }},
      {"tcs.xi_ml_min", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.xi_ml_min, v); }},
      {"tcs.kappa", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.kappa, v); }},
      {"tcs.alpha_env", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.alpha_env, v); }},
      {"tcs.alpha_high", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.alpha_high, v); }},
      {"tcs.env_quefrency_ms", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.env_quefrency_ms, v); }},
      {"tcs.pitch_min_hz", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.pitch_min_hz, v); }},
      {"tcs.pitch_max_hz", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.pitch_max_hz, v); }},
      {"tcs.pitch_peak_threshold", [](ToolConfig& c, const std::string& v) { assign_double(c.tcs.pitch_peak_threshold, v); }},
      {"tcs.pitch_vicinity", [](ToolConfig& c, const std::string& v) { assign_int(c.tcs.pitch_vicinity, v); }},
      {"enhance.g_min_db", [](ToolConfig& c, const std::string& v) { assign_double(c.g_min_db, v); }},
      {"train.batch_size", [](ToolConfig& c, const std::string& v) { assign_int(c.train.batch_size, v); }},
      {"train.loss_eps", [](ToolConfig& c, const std::string& v) { assign_double(c.train.loss_eps, v); }},
      {"train.early_stop_window", [](ToolConfig& c, const std::string& v) { assign_int(c.train.early_stop_window, v); }},
      {"train.early_stop_rel_improvement", [](ToolConfig& c, const std::string& v) { assign_double(c.train.early_stop_rel_improvement, v); }},
      {"train.validation_fraction", [](ToolConfig& c, const std::string& v) { assign_double(c.train.validation_fraction, v); }},
      {"train.learning_rate", [](ToolConfig& c, const std::string& v) { assign_double(c.train.learning_rate, v); }},
      {"train.rng_seed", [](ToolConfig& c, const std::string& v) { c.train.rng_seed = std::stoull(v); }},
      {"dataset.init_seconds", [](ToolConfig& c, const std::string& v) { assign_double(c.init_seconds, v); }},
      {"dataset.context", [](ToolConfig& c, const std::string& v) { assign_int(c.context, v); }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": bad value '" + value +
                        "' for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": value out of range for '" +
                        key + "'");
    }
  }
}

}  // namespace snre
