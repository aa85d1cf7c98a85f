#include "cae/trainer.hpp"

#include "cae/data.hpp"
#include "cae/io_format.hpp"
#include "cae/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace cae {

namespace {

std::vector<int> scale_hidden(std::vector<int> widths, double factor) {
  for (std::size_t i = 1; i + 1 < widths.size(); ++i)
    widths[i] = std::max(1, static_cast<int>(std::lround(widths[i] * factor)));
  return widths;
}

std::vector<int> parse_widths(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v || *v != std::floor(*v) || *v <= 0) throw std::invalid_argument("bad width '" + item + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::string join_widths(const std::vector<int>& widths) {
  std::string s;
  for (std::size_t i = 0; i < widths.size(); ++i) s += (i ? "," : "") + std::to_string(widths[i]);
  return s;
}

}  // namespace

std::vector<int> TrainConfig::resolved_enc_widths() const { return scale_hidden(enc_widths, width_factor); }
std::vector<int> TrainConfig::resolved_dec_widths() const { return scale_hidden(dec_widths, width_factor); }

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("train config: " + msg); };
  if (h < 1) fail("h must be >= 1");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  kernel.validate();
  if (kernel.h != h) fail("kernel h must equal h");
  if (enc_widths.size() < 2 || dec_widths.size() < 2) fail("widths need at least two entries");
  if (enc_widths.back() != h) fail("enc_widths must end with h");
  if (dec_widths.front() != h) fail("dec_widths must start with h");
  if (dec_widths.back() != enc_widths.front()) fail("decoder output must match encoder input");
  if (!(lr > 0.0)) fail("lr must be > 0");
  if (iters < 1) fail("iters must be >= 1");
  if (batch < 2 || batch <= h) fail("batch must be >= 2 and > h");
  if (!(width_factor > 0.0)) fail("width_factor must be > 0");
  if (history_every < 1) fail("history_every must be >= 1");
}

TrainConfig parse_train_config(std::istream& in) {
  TrainConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  bool kernel_c_set = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto number = [&]() {
      const auto v = parse_double(value);
      if (!v) throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad number for " + key);
      return *v;
    };
    auto integer = [&]() {
      const double v = number();
      if (v != std::floor(v))
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + key + " must be an integer");
      return v;
    };
    if (key == "h") cfg.h = static_cast<int>(integer());
    else if (key == "lambda") cfg.lambda = number();
    else if (key == "kernel") cfg.kernel.family = parse_kernel_family(value);
    else if (key == "epsilon") cfg.kernel.epsilon = number();
    else if (key == "sigma") cfg.kernel.sigma = number();
    else if (key == "c") { cfg.kernel.c = number(); kernel_c_set = true; }
    else if (key == "enc_widths") cfg.enc_widths = parse_widths(value);
    else if (key == "dec_widths") cfg.dec_widths = parse_widths(value);
    else if (key == "lr") cfg.lr = number();
    else if (key == "iters") cfg.iters = static_cast<int>(integer());
    else if (key == "batch") cfg.batch = static_cast<int>(integer());
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(integer());
    else if (key == "width_factor") cfg.width_factor = number();
    else if (key == "history_every") cfg.history_every = static_cast<int>(integer());
    else throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.kernel.h = cfg.h;
  if (cfg.kernel.family == KernelFamily::imq && !kernel_c_set) cfg.kernel.c = 2.0 * cfg.h;
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_train_config(in);
}

void write_train_config(std::ostream& out, const TrainConfig& cfg) {
  out << "h=" << cfg.h << '\n'
      << "lambda=" << format_double(cfg.lambda) << '\n'
      << "kernel=" << to_string(cfg.kernel.family) << '\n'
      << "epsilon=" << format_double(cfg.kernel.epsilon) << '\n'
      << "sigma=" << format_double(cfg.kernel.sigma) << '\n'
      << "c=" << format_double(cfg.kernel.c) << '\n'
      << "enc_widths=" << join_widths(cfg.enc_widths) << '\n'
      << "dec_widths=" << join_widths(cfg.dec_widths) << '\n'
      << "lr=" << format_double(cfg.lr) << '\n'
      << "iters=" << cfg.iters << '\n'
      << "batch=" << cfg.batch << '\n'
      << "seed=" << cfg.seed << '\n'
      << "width_factor=" << format_double(cfg.width_factor) << '\n'
      << "history_every=" << cfg.history_every << '\n';
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_batch(const MlpParams& enc, const MlpParams& dec, const SampleSet& x, const SampleSet& z) {
  if (x.size() != z.size() || x.size() < 2)
    throw std::invalid_argument("loss: data and prior batches must have equal size >= 2");
  if (static_cast<int>(x.dim()) != enc.input_dim() || static_cast<int>(z.dim()) != enc.output_dim() ||
      dec.input_dim() != enc.output_dim() || dec.output_dim() != enc.input_dim())
    throw std::invalid_argument("loss: network and batch dimensions do not agree");
}

}  // namespace

LossValue loss_eval(const MlpParams& enc, const MlpParams& dec, const SampleSet& x,
                    const SampleSet& z, const KernelSpec& kernel, double lambda) {
  check_batch(enc, dec, x, z);
  const SampleSet encoded(mlp_apply(enc, x.matrix()));
  const Eigen::MatrixXd recon = mlp_apply(dec, encoded.matrix());
  LossValue v;
  v.recon = (x.matrix() - recon).colwise().squaredNorm().sum() / static_cast<double>(x.size());
  v.mmd = mmd_unbiased(kernel, z, encoded);
  v.total = v.recon + lambda * v.mmd;
  return v;
}

LossGradients loss_and_gradients(const MlpParams& enc, const MlpParams& dec, const SampleSet& x,
                                 const SampleSet& z, const KernelSpec& kernel, double lambda) {
  check_batch(enc, dec, x, z);
  const double n = static_cast<double>(x.size());
  ForwardResult enc_fwd = mlp_forward(enc, x.matrix());
  const SampleSet encoded(enc_fwd.output);
  ForwardResult dec_fwd = mlp_forward(dec, encoded.matrix());
  const Eigen::MatrixXd residual = x.matrix() - dec_fwd.output;

  LossGradients out;
  out.loss.recon = residual.colwise().squaredNorm().sum() / n;
  out.loss.mmd = mmd_unbiased(kernel, z, encoded);
  out.loss.total = out.loss.recon + lambda * out.loss.mmd;

  out.dec = mlp_backward(dec, dec_fwd.cache, (-2.0 / n) * residual);
  Eigen::MatrixXd grad_latent = out.dec.input;
  if (lambda != 0.0) grad_latent += lambda * mmd_grad_q(kernel, z, encoded);
  out.enc = mlp_backward(enc, enc_fwd.cache, grad_latent);
  return out;
}

NonFiniteLossError::NonFiniteLossError(int iter, const LossValue& loss)
    : std::runtime_error("nonfinite loss at iteration " + std::to_string(iter) +
                         " (total=" + format_double(loss.total) + ", recon=" + format_double(loss.recon) +
                         ", mmd=" + format_double(loss.mmd) + ")"),
      iter_(iter),
      loss_(loss) {}

TrainResult train(const TrainConfig& config, const SampleSet& dataset, const HistoryCallback& on_history) {
  config.validate();
  const auto enc_widths = config.resolved_enc_widths();
  const auto dec_widths = config.resolved_dec_widths();
  if (static_cast<int>(dataset.dim()) != enc_widths.front())
    throw std::invalid_argument("train: dataset dimension does not match the encoder input");
  if (dataset.size() < static_cast<std::size_t>(config.batch))
    throw std::invalid_argument("train: dataset is smaller than one batch");

  // Independent streams for initialisation and sampling, all derived from the seed.
  std::uint64_t state = config.seed;
  const std::uint64_t enc_seed = splitmix64(state);
  const std::uint64_t dec_seed = splitmix64(state);
  const std::uint64_t sample_seed = splitmix64(state);

  TrainResult result;
  result.enc = mlp_init(enc_widths, enc_seed);
  result.dec = mlp_init(dec_widths, dec_seed);
  AdamState enc_state = AdamState::zeros_like(result.enc);
  AdamState dec_state = AdamState::zeros_like(result.dec);
  const AdamConfig adam{config.lr};

  std::mt19937_64 rng(sample_seed);
  std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto batch = static_cast<std::size_t>(config.batch);
  SampleSet x(dataset.dim(), batch);
  SampleSet z(static_cast<std::size_t>(config.h), batch);

  for (int it = 1; it <= config.iters; ++it) {
    for (std::size_t b = 0; b < batch; ++b) x.point(b) = dataset.point(pick(rng));
    for (std::size_t b = 0; b < batch; ++b)
      for (int d = 0; d < config.h; ++d) z.point(b)(d) = normal(rng);

    const LossGradients lg = loss_and_gradients(result.enc, result.dec, x, z, config.kernel, config.lambda);
    if (!std::isfinite(lg.loss.total) || !std::isfinite(lg.loss.recon) || !std::isfinite(lg.loss.mmd))
      throw NonFiniteLossError(it, lg.loss);
    adam_step(result.enc, lg.enc, enc_state, adam);
    adam_step(result.dec, lg.dec, dec_state, adam);

    if (it % config.history_every == 0) {
      result.history.push_back({it, lg.loss});
      if (on_history) on_history(result.history.back());
    }
  }
  return result;
}

void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& history) {
  out << "iter,total,recon,mmd\n";
  for (const auto& row : history)
    out << row.iter << ',' << format_double(row.loss.total) << ',' << format_double(row.loss.recon) << ','
        << format_double(row.loss.mmd) << '\n';
}

SampleSet generate(const MlpParams& dec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
  const SampleSet z = gaussian_prior_sample(n, static_cast<std::size_t>(dec.input_dim()), seed);
  return SampleSet(mlp_apply(dec, z.matrix()));
}

Reconstruction reconstruct(const MlpParams& enc, const MlpParams& dec, const SampleSet& x) {
  if (static_cast<int>(x.dim()) != enc.input_dim() || dec.input_dim() != enc.output_dim() ||
      dec.output_dim() != enc.input_dim())
    throw std::invalid_argument("reconstruct: network and data dimensions do not agree");
  Reconstruction r;
  r.outputs = SampleSet(mlp_apply(dec, mlp_apply(enc, x.matrix())));
  const Eigen::VectorXd errs = (x.matrix() - r.outputs.matrix()).colwise().squaredNorm().transpose();
  r.sq_errors.assign(errs.data(), errs.data() + errs.size());
  if (!r.sq_errors.empty()) {
    r.max_error = errs.maxCoeff();
    r.mean_error = errs.mean();
  }
  return r;
}

}  // namespace cae
