#pragma once

#include "cae/kernel.hpp"
#include "cae/sample_set.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace cae {

struct DescentOptions {
  double lr = 0.05;
  int iters = 20000;
  int record_every = 100;
  // Safeguarded steps: each particle's displacement is capped at half its
  // distance to the nearest other particle or target, and the step is halved
  // until the energy does not increase. Off gives the raw update
  // q <- q - lr * grad.
  bool safeguarded = true;
};

struct DescentRecord {
  int iter = 0;
  double energy = 0.0;
  Eigen::MatrixXd positions;
};

struct DescentResult {
  SampleSet final_positions;
  std::vector<DescentRecord> trajectory;
  // Set when the kernel is not Coulomb: the run is a comparison, outside the
  // regime where every local minimum is a permutation of the targets.
  bool comparison_mode = false;
};

// Synchronous descent of the free points `init` on mmd_unbiased(targets, .).
// Energies are recorded at iteration 0, every `record_every` steps and at the end.
DescentResult particle_descent(const KernelSpec& spec, const SampleSet& targets,
                               const SampleSet& init, const DescentOptions& options = {});

// Standard-normal targets and starting points in R^h from one seeded stream:
// the first n draws are the targets, the next n the starting points.
struct DescentProblem {
  SampleSet targets;
  SampleSet init;
};
DescentProblem seeded_descent_problem(std::size_t n, std::size_t h, std::uint64_t seed);

// Bijection perm with |q_i - targets_{perm[i]}| <= tol for every i, if one
// exists. Exhaustive search up to 8 points, minimum-cost assignment beyond.
std::optional<std::vector<std::size_t>> match_permutation(const SampleSet& q,
                                                          const SampleSet& targets, double tol);

// Minimum total-cost assignment (Hungarian method) on a square cost matrix.
// Returns assignment[row] = column.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

// CSV header "iter,energy,x0_0,x0_1,..." (point-major flattening).
void write_trajectory_csv(std::ostream& out, const DescentResult& result);

}  // namespace cae
