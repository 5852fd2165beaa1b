// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_MLP_HPP
#define SNRE_MLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace snre {

enum class Activation : std::uint8_t {
  kRelu = 0,
  kSigmoid = 1,
};

struct Layer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation;
};

/// Feed-forward mask estimator. Hidden layers are ReLU, the output layer is
/// sigmoid, so the predicted mask always lies in (0, 1).
struct MlpModel {
  std::vector<Layer> layers;

  int input_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weights.cols()); }
  int output_dim() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weights.rows()); }
  std::size_t parameter_count() const;
};

/// Uniform Glorot initialization on [-L, L], L = sqrt(6 / (fan_in + fan_out));
/// biases start at zero. Deterministic for a given seed.
MlpModel glorot_init(std::span<const int> dims, std::uint64_t seed);

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& input);

/// Batched forward pass; columns are samples.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// Biased log loss for one frame (sum over bins):
///   J = sum_k (ln(irm_hat_k + eps) - ln(irm_k + eps))^2.
double irm_log_loss(const Eigen::VectorXd& irm_hat, const Eigen::VectorXd& irm, double eps);

/// Mean per-frame loss over a batch (columns are frames).
double irm_log_loss_batch(const Eigen::MatrixXd& irm_hat, const Eigen::MatrixXd& irm,
                          double eps);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
};

/// Exact gradients of the batch-mean loss w.r.t. every parameter. The ReLU
/// subgradient at exactly 0 is taken as 0. When batch_loss is non-null it
/// receives the mean per-frame loss of this batch.
Gradients backward(const MlpModel& model, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets, double eps,
                   double* batch_loss = nullptr);

struct AdaGradState {
  std::vector<Eigen::MatrixXd> weight_acc;  // accumulated squared gradients
  std::vector<Eigen::VectorXd> bias_acc;
  double learning_rate = 0.005;
  double stability_eps = 1e-8;
};

AdaGradState make_adagrad_state(const MlpModel& model, double learning_rate = 0.005);

/// acc += g^2; param -= lr * g / (sqrt(acc) + stability_eps), elementwise.
void adagrad_step(MlpModel& model, AdaGradState& opt, const Gradients& grads);

struct TrainConfig {
  int batch_size = 128;
  double loss_eps = 0.1;
  int early_stop_window = 10;                // epochs
  double early_stop_rel_improvement = 0.01;  // 1 %
  double validation_fraction = 0.15;
  double learning_rate = 0.005;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Binary model file, little-endian: magic "SNRDNN1\0", u32 version (1),
/// u32 layer count, per layer (u32 in, u32 out, u8 activation id), then the
/// weights of every layer row-major, then the biases of every layer, all f64.
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace snre

#endif  // SNRE_MLP_HPP
