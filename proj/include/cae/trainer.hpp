#pragma once

#include "cae/kernel.hpp"
#include "cae/net.hpp"
#include "cae/sample_set.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cae {

struct TrainConfig {
  int h = 2;
  double lambda = 100.0;
  KernelSpec kernel = KernelSpec::coulomb(2, 1e-3);
  std::vector<int> enc_widths{2, 128, 128, 2};
  std::vector<int> dec_widths{2, 128, 128, 2};
  double lr = 1e-3;
  int iters = 20000;
  int batch = 128;
  std::uint64_t seed = 0;
  // Multiplies every hidden width (input/output widths are untouched).
  double width_factor = 1.0;
  int history_every = 100;

  std::vector<int> resolved_enc_widths() const;
  std::vector<int> resolved_dec_widths() const;
  void validate() const;
};

// key=value lines using the field names above; '#' starts a comment.
// Widths are comma separated. The kernel's h always follows `h`.
TrainConfig parse_train_config(std::istream& in);
TrainConfig load_train_config(const std::string& path);
void write_train_config(std::ostream& out, const TrainConfig& config);

struct LossValue {
  double total = 0.0;
  double recon = 0.0;
  double mmd = 0.0;
};

// recon = mean_i |x_i - g(f(x_i))|^2, mmd = mmd_unbiased(Z, f(X)),
// total = recon + lambda * mmd.
LossValue loss_eval(const MlpParams& enc, const MlpParams& dec, const SampleSet& x,
                    const SampleSet& z, const KernelSpec& kernel, double lambda);

struct LossGradients {
  LossValue loss;
  MlpGrads enc;
  MlpGrads dec;
};

// The prior batch is a constant; the MMD term reaches the encoder through
// the encoded points only.
LossGradients loss_and_gradients(const MlpParams& enc, const MlpParams& dec, const SampleSet& x,
                                 const SampleSet& z, const KernelSpec& kernel, double lambda);

struct HistoryRow {
  int iter = 0;
  LossValue loss;
};

struct TrainResult {
  MlpParams enc;
  MlpParams dec;
  std::vector<HistoryRow> history;
};

class NonFiniteLossError : public std::runtime_error {
 public:
  NonFiniteLossError(int iter, const LossValue& loss);
  int iter() const { return iter_; }
  const LossValue& loss() const { return loss_; }

 private:
  int iter_;
  LossValue loss_;
};

using HistoryCallback = std::function<void(const HistoryRow&)>;

TrainResult train(const TrainConfig& config, const SampleSet& dataset,
                  const HistoryCallback& on_history = {});

void write_history_csv(std::ostream& out, const std::vector<HistoryRow>& history);

// Decoder applied to n seeded standard-normal latent draws.
SampleSet generate(const MlpParams& dec, std::size_t n, std::uint64_t seed);

struct Reconstruction {
  SampleSet outputs;
  std::vector<double> sq_errors;
  double max_error = 0.0;
  double mean_error = 0.0;
};

Reconstruction reconstruct(const MlpParams& enc, const MlpParams& dec, const SampleSet& x);

}  // namespace cae
