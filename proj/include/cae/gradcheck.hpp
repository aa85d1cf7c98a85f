#pragma once

#include "cae/kernel.hpp"

#include <cstdint>
#include <vector>

namespace cae {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t parameters = 0;
};

// Compares the analytic gradient of the full autoencoder loss with central
// differences at a random configuration: encoder `widths`, decoder the
// reversed widths, grid-data batch and prior batch drawn from `seed`.
// Errors are |analytic - numeric|_inf / max(|analytic|_inf, |numeric|_inf)
// per parameter tensor; the report keeps the worst.
GradCheckReport check_loss_gradient(const std::vector<int>& widths, int batch, std::uint64_t seed,
                                    const KernelSpec& kernel, double lambda, double step = 1e-5);

}  // namespace cae
