#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cae {

// Fully connected network. Layer l maps widths[l] -> widths[l+1] with
// weights[l] of shape (widths[l+1] x widths[l]). Hidden layers use ReLU, the
// output layer is affine.
struct MlpParams {
  std::vector<int> widths;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  std::size_t layers() const { return weights.size(); }
  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }
  std::size_t parameter_count() const;
  void validate() const;

  friend bool operator==(const MlpParams& a, const MlpParams& b);
};

// He initialisation: N(0, 2/fan_in) weights, zero biases.
MlpParams mlp_init(std::span<const int> widths, std::uint64_t seed);

// Pre-activations of every layer plus the inputs that fed them, tagged with a
// fingerprint of the parameters that produced them.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> layer_inputs;
  std::vector<Eigen::MatrixXd> pre_activations;
  std::uint64_t fingerprint = 0;
};

struct ForwardResult {
  Eigen::MatrixXd output;
  ForwardCache cache;
};

// Inputs are column batches: X has widths[0] rows and one column per sample.
ForwardResult mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x);
Eigen::MatrixXd mlp_apply(const MlpParams& params, const Eigen::MatrixXd& x);

struct MlpGrads {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd input;
};

// Gradients of the scalar whose derivative with respect to the network output
// is `grad_output`. ReLU'(0) is taken as 0.
MlpGrads mlp_backward(const MlpParams& params, const ForwardCache& cache,
                      const Eigen::MatrixXd& grad_output);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
  std::int64_t t = 0;

  static AdamState zeros_like(const MlpParams& params);
};

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state,
               const AdamConfig& config = {});

std::uint64_t fingerprint(const MlpParams& params);

// Text checkpoint: "cae-ckpt v1", the widths, then per layer the weight rows
// followed by the bias row, 17 significant digits.
void write_checkpoint(std::ostream& out, const MlpParams& params);
MlpParams read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const MlpParams& params);
MlpParams load_checkpoint(const std::string& path);

}  // namespace cae
