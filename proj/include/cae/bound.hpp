#pragma once

#include "cae/kernel.hpp"
#include "cae/net.hpp"
#include "cae/sample_set.hpp"

#include <array>
#include <optional>

namespace cae {

// Inputs of the deviation bound between the empirical and population losses.
// N: sample count, K: kernel supremum k(z, z), xi: bound on the squared
// reconstruction error, s/u/v/t: slack allotted to the three MMD sums and to
// the reconstruction term.
struct BoundInputs {
  long long N = 0;
  double K = 1.0;
  double xi = 1.0;
  double lambda = 1.0;
  double s = 0.1;
  double u = 0.1;
  double v = 0.1;
  double t = 0.1;

  void validate() const;
};

struct BoundResult {
  // min(1, raw_sum): bound on Pr{|L_hat - L| > threshold}.
  double probability = 1.0;
  double raw_sum = 0.0;
  // t + lambda (s + u + v)
  double threshold = 0.0;
  // 2exp(-2Nt^2/xi^2), 2exp(-2 floor(N/2) s^2/K^2), 2exp(-2 floor(N/2) u^2/K^2), 2exp(-2N v^2/K^2)
  std::array<double, 4> terms{};
};

BoundResult generalization_bound(const BoundInputs& in);

struct XiEstimate {
  double xi_hat = 0.0;
  double mean_error = 0.0;
};

// Max and mean squared reconstruction error over train and holdout together.
XiEstimate estimate_xi(const MlpParams& enc, const MlpParams& dec, const SampleSet& train,
                       const SampleSet& holdout);

// k(z, z) for bounded kernels; nullopt when the kernel is unbounded at
// coincidence (unsmoothed Coulomb) or the diagonal is not positive.
std::optional<double> effective_K(const KernelSpec& spec);

}  // namespace cae
