#include "cae/gradcheck.hpp"

#include "cae/data.hpp"
#include "cae/trainer.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace cae {

namespace {

double tensor_error(const Eigen::ArrayXd& analytic, const Eigen::ArrayXd& numeric) {
  const double scale = std::max(analytic.abs().maxCoeff(), numeric.abs().maxCoeff());
  const double diff = (analytic - numeric).abs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

GradCheckReport check_loss_gradient(const std::vector<int>& widths, int batch, std::uint64_t seed,
                                    const KernelSpec& kernel, double lambda, double step) {
  if (widths.size() < 2) throw std::invalid_argument("gradcheck: need at least two widths");
  if (batch < 2) throw std::invalid_argument("gradcheck: batch must be >= 2");
  const int h = widths.back();
  std::vector<int> dec_widths(widths.rbegin(), widths.rend());
  MlpParams enc = mlp_init(widths, seed);
  MlpParams dec = mlp_init(dec_widths, seed + 1);
  std::mt19937_64 rng(seed + 2);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (auto* net : {&enc, &dec})
    for (auto& b : net->biases)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = normal(rng);

  SampleSet x = widths.front() == 2 ? grid_dataset(static_cast<std::size_t>(batch), seed + 3)
                                    : gaussian_prior_sample(static_cast<std::size_t>(batch),
                                                            static_cast<std::size_t>(widths.front()), seed + 3);
  const SampleSet z = gaussian_prior_sample(static_cast<std::size_t>(batch), static_cast<std::size_t>(h), seed + 4);
  KernelSpec k = kernel;
  k.h = h;

  const LossGradients lg = loss_and_gradients(enc, dec, x, z, k, lambda);
  GradCheckReport report;
  auto loss_at = [&]() { return loss_eval(enc, dec, x, z, k, lambda).total; };

  auto check_tensor = [&](double* data, Eigen::Index n, const double* analytic) {
    Eigen::ArrayXd numeric(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double saved = data[i];
      data[i] = saved + step;
      const double up = loss_at();
      data[i] = saved - step;
      const double down = loss_at();
      data[i] = saved;
      numeric(i) = (up - down) / (2.0 * step);
    }
    report.max_rel_error =
        std::max(report.max_rel_error, tensor_error(Eigen::Map<const Eigen::ArrayXd>(analytic, n), numeric));
    report.parameters += static_cast<std::size_t>(n);
  };

  for (std::size_t l = 0; l < enc.layers(); ++l) {
    check_tensor(enc.weights[l].data(), enc.weights[l].size(), lg.enc.weights[l].data());
    check_tensor(enc.biases[l].data(), enc.biases[l].size(), lg.enc.biases[l].data());
  }
  for (std::size_t l = 0; l < dec.layers(); ++l) {
    check_tensor(dec.weights[l].data(), dec.weights[l].size(), lg.dec.weights[l].data());
    check_tensor(dec.biases[l].data(), dec.biases[l].size(), lg.dec.biases[l].data());
  }
  return report;
}

}  // namespace cae
