#include "cae/bound.hpp"

#include "cae/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cae {

void BoundInputs::validate() const {
  if (N < 2) throw std::invalid_argument("bound: N must be >= 2");
  for (double x : {K, xi, lambda, s, u, v, t})
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("bound: K, xi, lambda, s, u, v, t must be > 0");
}

BoundResult generalization_bound(const BoundInputs& in) {
  in.validate();
  const double n = static_cast<double>(in.N);
  const double half = static_cast<double>(in.N / 2);
  const double k2 = in.K * in.K;
  BoundResult r;
  r.terms = {2.0 * std::exp(-2.0 * n * in.t * in.t / (in.xi * in.xi)),
             2.0 * std::exp(-2.0 * half * in.s * in.s / k2),
             2.0 * std::exp(-2.0 * half * in.u * in.u / k2),
             2.0 * std::exp(-2.0 * n * in.v * in.v / k2)};
  r.raw_sum = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
  r.probability = std::min(1.0, r.raw_sum);
  r.threshold = in.t + in.lambda * (in.s + in.u + in.v);
  return r;
}

XiEstimate estimate_xi(const MlpParams& enc, const MlpParams& dec, const SampleSet& train,
                       const SampleSet& holdout) {
  if (train.empty() || holdout.empty()) throw std::invalid_argument("estimate_xi: empty sample set");
  const Reconstruction a = reconstruct(enc, dec, train);
  const Reconstruction b = reconstruct(enc, dec, holdout);
  XiEstimate out;
  out.xi_hat = std::max(a.max_error, b.max_error);
  const double total = a.mean_error * static_cast<double>(train.size()) +
                       b.mean_error * static_cast<double>(holdout.size());
  out.mean_error = total / static_cast<double>(train.size() + holdout.size());
  return out;
}

std::optional<double> effective_K(const KernelSpec& spec) {
  const Kernel k(spec);
  switch (spec.family) {
    case KernelFamily::gaussian:
    case KernelFamily::imq:
      return k.value(0.0);
    case KernelFamily::coulomb: {
      if (spec.epsilon == 0.0) return std::nullopt;
      const double diag = k.value(0.0);
      if (!(diag > 0.0)) return std::nullopt;
      return diag;
    }
  }
  return std::nullopt;
}

}  // namespace cae
