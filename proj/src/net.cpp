#include "cae/net.hpp"

#include "cae/io_format.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cae {

namespace {

void require_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("mlp: ") + what);
}

}  // namespace

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layers(); ++l)
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

void MlpParams::validate() const {
  require_shape(widths.size() >= 2, "need at least input and output widths");
  for (int w : widths) require_shape(w > 0, "widths must be positive");
  require_shape(weights.size() == widths.size() - 1 && biases.size() == weights.size(),
                "layer count does not match widths");
  for (std::size_t l = 0; l < layers(); ++l) {
    require_shape(weights[l].rows() == widths[l + 1] && weights[l].cols() == widths[l],
                  "weight shape does not match widths");
    require_shape(biases[l].size() == widths[l + 1], "bias shape does not match widths");
  }
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  if (a.widths != b.widths || a.layers() != b.layers()) return false;
  for (std::size_t l = 0; l < a.layers(); ++l)
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  return true;
}

MlpParams mlp_init(std::span<const int> widths, std::uint64_t seed) {
  MlpParams p;
  p.widths.assign(widths.begin(), widths.end());
  require_shape(p.widths.size() >= 2, "need at least input and output widths");
  for (int w : p.widths) require_shape(w > 0, "widths must be positive");
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
    const int fan_in = p.widths[l];
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
    Eigen::MatrixXd w(p.widths[l + 1], fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = normal(rng);
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(p.widths[l + 1]));
  }
  return p;
}

std::uint64_t fingerprint(const MlpParams& params) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const double* data, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, data + i, sizeof bits);
      h = (h ^ bits) * 1099511628211ULL;
    }
  };
  for (std::size_t l = 0; l < params.layers(); ++l) {
    mix(params.weights[l].data(), params.weights[l].size());
    mix(params.biases[l].data(), params.biases[l].size());
  }
  return h;
}

ForwardResult mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x) {
  params.validate();
  if (x.rows() != params.input_dim()) throw std::invalid_argument("mlp: input dimension mismatch");
  ForwardResult res;
  res.cache.fingerprint = fingerprint(params);
  Eigen::MatrixXd act = x;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    Eigen::MatrixXd pre = params.weights[l] * act;
    pre.colwise() += params.biases[l];
    res.cache.layer_inputs.push_back(std::move(act));
    act = l + 1 < params.layers() ? Eigen::MatrixXd(pre.cwiseMax(0.0)) : pre;
    res.cache.pre_activations.push_back(std::move(pre));
  }
  res.output = std::move(act);
  return res;
}

Eigen::MatrixXd mlp_apply(const MlpParams& params, const Eigen::MatrixXd& x) {
  params.validate();
  if (x.rows() != params.input_dim()) throw std::invalid_argument("mlp: input dimension mismatch");
  Eigen::MatrixXd act = x;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    Eigen::MatrixXd pre = params.weights[l] * act;
    pre.colwise() += params.biases[l];
    act = l + 1 < params.layers() ? Eigen::MatrixXd(pre.cwiseMax(0.0)) : std::move(pre);
  }
  return act;
}

MlpGrads mlp_backward(const MlpParams& params, const ForwardCache& cache,
                      const Eigen::MatrixXd& grad_output) {
  params.validate();
  const std::size_t n = params.layers();
  if (cache.pre_activations.size() != n || cache.layer_inputs.size() != n)
    throw std::invalid_argument("mlp_backward: cache does not match network depth");
  if (cache.fingerprint != fingerprint(params))
    throw std::invalid_argument("mlp_backward: cache is stale (parameters changed since forward)");
  if (grad_output.rows() != params.output_dim() ||
      grad_output.cols() != cache.pre_activations.back().cols())
    throw std::invalid_argument("mlp_backward: grad_output shape mismatch");

  MlpGrads g;
  g.weights.resize(n);
  g.biases.resize(n);
  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = n; l-- > 0;) {
    if (l + 1 < n) delta = delta.cwiseProduct((cache.pre_activations[l].array() > 0.0).cast<double>().matrix());
    g.weights[l].noalias() = delta * cache.layer_inputs[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    delta = params.weights[l].transpose() * delta;
  }
  g.input = std::move(delta);
  return g;
}

AdamState AdamState::zeros_like(const MlpParams& params) {
  AdamState s;
  for (std::size_t l = 0; l < params.layers(); ++l) {
    s.m_weights.push_back(Eigen::MatrixXd::Zero(params.weights[l].rows(), params.weights[l].cols()));
    s.v_weights.push_back(s.m_weights.back());
    s.m_biases.push_back(Eigen::VectorXd::Zero(params.biases[l].size()));
    s.v_biases.push_back(s.m_biases.back());
  }
  return s;
}

namespace {

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, const AdamConfig& cfg, double bc1, double bc2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  param.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
}

}  // namespace

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state, const AdamConfig& config) {
  const std::size_t n = params.layers();
  if (grads.weights.size() != n || grads.biases.size() != n || state.m_weights.size() != n ||
      state.v_weights.size() != n || state.m_biases.size() != n || state.v_biases.size() != n)
    throw std::invalid_argument("adam: layer count mismatch");
  for (std::size_t l = 0; l < n; ++l) {
    const auto& w = params.weights[l];
    if (grads.weights[l].rows() != w.rows() || grads.weights[l].cols() != w.cols() ||
        state.m_weights[l].rows() != w.rows() || state.m_weights[l].cols() != w.cols() ||
        grads.biases[l].size() != params.biases[l].size() ||
        state.m_biases[l].size() != params.biases[l].size())
      throw std::invalid_argument("adam: shape mismatch");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (std::size_t l = 0; l < n; ++l) {
    adam_update(params.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l], config, bc1, bc2);
    adam_update(params.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l], config, bc1, bc2);
  }
}

void write_checkpoint(std::ostream& out, const MlpParams& params) {
  params.validate();
  out << "cae-ckpt v1\n";
  for (std::size_t i = 0; i < params.widths.size(); ++i)
    out << (i ? " " : "") << params.widths[i];
  out << '\n';
  for (std::size_t l = 0; l < params.layers(); ++l) {
    const auto& w = params.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << format_double(w(r, c));
      out << '\n';
    }
    const auto& b = params.biases[l];
    for (Eigen::Index r = 0; r < b.size(); ++r) out << (r ? " " : "") << format_double(b(r));
    out << '\n';
  }
}

MlpParams read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || (line != "cae-ckpt v1" && line != "cae-ckpt v1\r"))
    throw std::runtime_error("checkpoint: missing 'cae-ckpt v1' header");
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: missing widths line");
  MlpParams p;
  {
    std::istringstream ws(line);
    int w = 0;
    while (ws >> w) p.widths.push_back(w);
  }
  if (p.widths.size() < 2) throw std::runtime_error("checkpoint: need at least two widths");
  for (int w : p.widths)
    if (w <= 0) throw std::runtime_error("checkpoint: widths must be positive");
  auto next_value = [&in]() {
    std::string token;
    if (!(in >> token)) throw std::runtime_error("checkpoint: truncated parameter data");
    auto v = parse_double(token);
    if (!v) throw std::runtime_error("checkpoint: bad number '" + token + "'");
    return *v;
  };
  for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
    Eigen::MatrixXd w(p.widths[l + 1], p.widths[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = next_value();
    Eigen::VectorXd b(p.widths[l + 1]);
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = next_value();
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("checkpoint: trailing data after parameters");
  return p;
}

void save_checkpoint(const std::string& path, const MlpParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_checkpoint(out, params);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_checkpoint(in);
}

}  // namespace cae
