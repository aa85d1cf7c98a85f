#pragma once

#include "cae/kernel.hpp"
#include "cae/sample_set.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace cae {

// Unbiased MMD^2 estimate between two sample sets. Same-set sums skip the
// diagonal; unequal sizes use 1/(Np(Np-1)), -2/(Np Nq), 1/(Nq(Nq-1)).
double mmd_unbiased(const KernelSpec& spec, const SampleSet& p, const SampleSet& q);

// Gradient of mmd_unbiased(p, q) with respect to every point of q.
// Column i holds d/dq_i.
Eigen::MatrixXd mmd_grad_q(const KernelSpec& spec, const SampleSet& p, const SampleSet& q);

// Signed point charges. Positive charges play the prior samples, negative
// charges the encoded samples.
struct ChargeSystem {
  SampleSet positions;
  std::vector<double> charges;

  void validate() const;
};

// Pairwise interaction energy sum_{i<j} q_i q_j k(z_i, z_j). Self-interaction
// terms are position-independent and left out.
double charge_energy(const KernelSpec& spec, const ChargeSystem& sys);

// Energy of `fixed` plus one or two free unit negative charges scanned over a
// 1-D grid. For two free charges the values are stored row-major over
// (z1, z2) and are exactly symmetric under exchange.
struct Landscape {
  int n_free = 1;
  std::vector<double> grid;
  std::vector<double> energy;
  std::vector<bool> singular;

  double at(std::size_t i) const { return energy[i]; }
  double at(std::size_t i, std::size_t j) const { return energy[i * grid.size() + j]; }
  bool is_singular(std::size_t i, std::size_t j) const { return singular[i * grid.size() + j]; }
};

Landscape landscape_scan(const KernelSpec& spec, const ChargeSystem& fixed, int n_free,
                         std::span<const double> grid);

// min + k*step for k = 0..round((max-min)/step).
std::vector<double> make_grid(double min, double max, double step);

// Indices of strict interior local minima. A run of equal values bordered by a
// strict descent and a strict ascent counts once, at the run's first index.
std::vector<std::size_t> local_minima(std::span<const double> values);
std::size_t count_local_minima(std::span<const double> values);

// Local minima of a 1-D landscape after dropping singular cells; returned as
// indices into landscape.grid.
std::vector<std::size_t> landscape_local_minima(const Landscape& landscape);

// Non-singular cells attaining the smallest energy exactly, as (i, j) pairs
// (j is 0 for one free charge).
std::vector<std::pair<std::size_t, std::size_t>> global_minimum_cells(const Landscape& landscape);

// CSV with header "z,energy" or "z1,z2,energy"; singular cells are written as nan.
void write_landscape_csv(std::ostream& out, const Landscape& landscape);

}  // namespace cae
