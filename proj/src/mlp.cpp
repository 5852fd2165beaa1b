// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "snre/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "snre/errors.hpp"
#include "snre/rng.hpp"

namespace snre {

namespace {

constexpr char kModelMagic[8] = {'S', 'N', 'R', 'D', 'N', 'N', '1', '\0'};
constexpr std::uint32_t kModelVersion = 1;

Eigen::MatrixXd apply_activation(Eigen::MatrixXd z, Activation act) {
  if (act == Activation::kRelu) {
    return z.cwiseMax(0.0);
  }
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4] = {0, 0, 0, 0};
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
  unsigned char b[8] = {0};
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

// Pre-activation values for every layer; the last entry is the network output
// after activation, earlier entries hold post-activation values.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = input
};

ForwardTrace forward_trace(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  ForwardTrace trace;
  trace.activations.reserve(model.layers.size() + 1);
  trace.activations.push_back(inputs);
  for (const Layer& layer : model.layers) {
    Eigen::MatrixXd z = (layer.weights * trace.activations.back()).colwise() + layer.bias;
    trace.activations.push_back(apply_activation(std::move(z), layer.activation));
  }
  return trace;
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& layer : layers) {
    n += static_cast<std::size_t>(layer.weights.size()) +
         static_cast<std::size_t>(layer.bias.size());
  }
  return n;
}

MlpModel glorot_init(std::span<const int> dims, std::uint64_t seed) {
  if (dims.size() < 2) {
    throw ConfigError("glorot_init: need at least input and output dims");
  }
  for (int d : dims) {
    if (d <= 0) throw ConfigError("glorot_init: dims must be positive");
  }
  Rng rng(seed);
  MlpModel model;
  model.layers.resize(dims.size() - 1);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Layer& layer = model.layers[i];
    layer.weights.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        layer.weights(r, c) = rng.uniform(-limit, limit);
      }
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layer.activation =
        (i + 2 == dims.size()) ? Activation::kSigmoid : Activation::kRelu;
  }
  return model;
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& input) {
  if (input.size() != model.input_dim()) {
    throw ShapeError("forward: input dim " + std::to_string(input.size()) +
                     " does not match model input dim " +
                     std::to_string(model.input_dim()));
  }
  Eigen::MatrixXd x = input;
  for (const Layer& layer : model.layers) {
    x = apply_activation((layer.weights * x).colwise() + layer.bias, layer.activation);
  }
  return x.col(0);
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != model.input_dim()) {
    throw ShapeError("forward_batch: input dim " + std::to_string(inputs.rows()) +
                     " does not match model input dim " +
                     std::to_string(model.input_dim()));
  }
  Eigen::MatrixXd x = inputs;
  for (const Layer& layer : model.layers) {
    x = apply_activation((layer.weights * x).colwise() + layer.bias, layer.activation);
  }
  return x;
}

double irm_log_loss(const Eigen::VectorXd& irm_hat, const Eigen::VectorXd& irm, double eps) {
  if (irm_hat.size() != irm.size()) throw ShapeError("irm_log_loss: size mismatch");
  double j = 0.0;
  for (Eigen::Index k = 0; k < irm_hat.size(); ++k) {
    const double d = std::log(irm_hat[k] + eps) - std::log(irm[k] + eps);
    j += d * d;
  }
  return j;
}

double irm_log_loss_batch(const Eigen::MatrixXd& irm_hat, const Eigen::MatrixXd& irm,
                          double eps) {
  if (irm_hat.rows() != irm.rows() || irm_hat.cols() != irm.cols()) {
    throw ShapeError("irm_log_loss_batch: shape mismatch");
  }
  if (irm_hat.cols() == 0) throw EmptyInputError("irm_log_loss_batch: empty batch");
  const Eigen::ArrayXXd d =
      (irm_hat.array() + eps).log() - (irm.array() + eps).log();
  return d.square().sum() / static_cast<double>(irm_hat.cols());
}

Gradients backward(const MlpModel& model, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets, double eps, double* batch_loss) {
  if (inputs.cols() == 0) throw EmptyInputError("backward: empty batch");
  if (inputs.cols() != targets.cols()) throw ShapeError("backward: batch size mismatch");
  if (targets.rows() != model.output_dim()) {
    throw ShapeError("backward: target dim " + std::to_string(targets.rows()) +
                     " does not match model output dim " +
                     std::to_string(model.output_dim()));
  }
  const ForwardTrace trace = forward_trace(model, inputs);
  if (batch_loss != nullptr) {
    *batch_loss = irm_log_loss_batch(trace.activations.back(), targets, eps);
  }
  const double inv_batch = 1.0 / static_cast<double>(inputs.cols());
  const std::size_t n_layers = model.layers.size();

  Gradients grads;
  grads.weights.resize(n_layers);
  grads.bias.resize(n_layers);

  // dJ/dy caught at the output, then pushed through the activation of each
  // layer while walking backwards.
  const Eigen::MatrixXd& y = trace.activations.back();
  Eigen::MatrixXd delta =
      2.0 * ((y.array() + eps).log() - (targets.array() + eps).log()) / (y.array() + eps);

  for (std::size_t i = n_layers; i-- > 0;) {
    const Layer& layer = model.layers[i];
    const Eigen::MatrixXd& out = trace.activations[i + 1];
    if (layer.activation == Activation::kSigmoid) {
      delta = delta.array() * out.array() * (1.0 - out.array());
    } else {
      delta = delta.array() * (out.array() > 0.0).cast<double>();
    }
    grads.weights[i] = inv_batch * (delta * trace.activations[i].transpose());
    grads.bias[i] = inv_batch * delta.rowwise().sum();
    if (i > 0) delta = layer.weights.transpose() * delta;
  }
  return grads;
}

AdaGradState make_adagrad_state(const MlpModel& model, double learning_rate) {
  AdaGradState opt;
  opt.learning_rate = learning_rate;
  opt.weight_acc.reserve(model.layers.size());
  opt.bias_acc.reserve(model.layers.size());
  for (const Layer& layer : model.layers) {
    opt.weight_acc.push_back(
        Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    opt.bias_acc.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return opt;
}

void adagrad_step(MlpModel& model, AdaGradState& opt, const Gradients& grads) {
  if (grads.weights.size() != model.layers.size() ||
      opt.weight_acc.size() != model.layers.size()) {
    throw ShapeError("adagrad_step: layer count mismatch");
  }
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    Layer& layer = model.layers[i];
    opt.weight_acc[i].array() += grads.weights[i].array().square();
    layer.weights.array() -= opt.learning_rate * grads.weights[i].array() /
                             (opt.weight_acc[i].array().sqrt() + opt.stability_eps);
    opt.bias_acc[i].array() += grads.bias[i].array().square();
    layer.bias.array() -= opt.learning_rate * grads.bias[i].array() /
                          (opt.bias_acc[i].array().sqrt() + opt.stability_eps);
  }
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("TrainConfig: batch_size must be >= 1");
  if (loss_eps <= 0.0) throw ConfigError("TrainConfig: loss_eps must be positive");
  if (early_stop_window < 1) throw ConfigError("TrainConfig: early_stop_window must be >= 1");
  if (validation_fraction <= 0.0 || validation_fraction >= 1.0) {
    throw ConfigError("TrainConfig: validation_fraction must be in (0, 1)");
  }
  if (learning_rate <= 0.0) throw ConfigError("TrainConfig: learning_rate must be positive");
}

void save_model(const MlpModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_model: cannot open " + path);
  os.write(kModelMagic, 8);
  write_u32(os, kModelVersion);
  write_u32(os, static_cast<std::uint32_t>(model.layers.size()));
  for (const Layer& layer : model.layers) {
    write_u32(os, static_cast<std::uint32_t>(layer.weights.cols()));
    write_u32(os, static_cast<std::uint32_t>(layer.weights.rows()));
    const unsigned char act = static_cast<unsigned char>(layer.activation);
    os.write(reinterpret_cast<const char*>(&act), 1);
  }
  for (const Layer& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        write_f64(os, layer.weights(r, c));
      }
    }
  }
  for (const Layer& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) write_f64(os, layer.bias[r]);
  }
  if (!os) throw IoError("save_model: write failed for " + path);
}

MlpModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_model: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kModelMagic, 8) != 0) {
    throw CorruptModelError("load_model: bad magic in " + path +
                            ", expected SNRDNN1");
  }
  const std::uint32_t version = read_u32(is);
  if (!is || version != kModelVersion) {
    throw CorruptModelError("load_model: unsupported version " + std::to_string(version));
  }
  const std::uint32_t n_layers = read_u32(is);
  if (!is || n_layers == 0 || n_layers > 64) {
    throw CorruptModelError("load_model: implausible layer count");
  }
  MlpModel model;
  model.layers.resize(n_layers);
  for (auto& layer : model.layers) {
    const std::uint32_t in = read_u32(is);
    const std::uint32_t out = read_u32(is);
    unsigned char act = 0;
    is.read(reinterpret_cast<char*>(&act), 1);
    if (!is || in == 0 || out == 0 || act > 1) {
      throw CorruptModelError("load_model: bad layer header in " + path);
    }
    layer.weights.resize(out, in);
    layer.bias.resize(out);
    layer.activation = static_cast<Activation>(act);
  }
  for (auto& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = read_f64(is);
      }
    }
    if (!is) throw CorruptModelError("load_model: truncated weights in " + path);
  }
  for (auto& layer : model.layers) {
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = read_f64(is);
    if (!is) throw CorruptModelError("load_model: truncated biases in " + path);
  }
  // Adjacent layers must chain.
  for (std::size_t i = 0; i + 1 < model.layers.size(); ++i) {
    if (model.layers[i].weights.rows() != model.layers[i + 1].weights.cols()) {
      throw CorruptModelError("load_model: layer dims do not chain in " + path);
    }
  }
  return model;
}

}  // namespace snre
