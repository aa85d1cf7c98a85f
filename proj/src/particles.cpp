#include "cae/particles.hpp"

#include "cae/data.hpp"
#include "cae/io_format.hpp"
#include "cae/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cae {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

// Half the distance from each free point to its nearest neighbour among the
// other free points and the targets.
Eigen::VectorXd step_caps(const SampleSet& q, const SampleSet& targets) {
  Eigen::VectorXd caps(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q.size(); ++j)
      if (j != i) nearest = std::min(nearest, (q.point(i) - q.point(j)).squaredNorm());
    for (std::size_t j = 0; j < targets.size(); ++j)
      nearest = std::min(nearest, (q.point(i) - targets.point(j)).squaredNorm());
    caps(static_cast<Eigen::Index>(i)) = 0.5 * std::sqrt(nearest);
  }
  return caps;
}

}  // namespace

DescentProblem seeded_descent_problem(std::size_t n, std::size_t h, std::uint64_t seed) {
  const SampleSet both = gaussian_prior_sample(2 * n, h, seed);
  const auto cols = static_cast<Eigen::Index>(n);
  return {SampleSet(both.matrix().leftCols(cols)), SampleSet(both.matrix().rightCols(cols))};
}

DescentResult particle_descent(const KernelSpec& spec, const SampleSet& targets,
                               const SampleSet& init, const DescentOptions& options) {
  spec.validate();
  if (targets.dim() != init.dim()) throw std::invalid_argument("descent: dimension mismatch");
  const std::size_t dim = init.dim();
  if (init.size() <= dim || targets.size() <= dim)
    throw std::invalid_argument("descent: need more points than dimensions (N > h)");
  if (spec.family == KernelFamily::coulomb && static_cast<std::size_t>(spec.h) != dim)
    throw std::invalid_argument("descent: coulomb kernel h must equal the point dimension");
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets.point(i) == targets.point(j))
        throw std::invalid_argument("descent: targets must be pairwise distinct");
  if (!(options.lr > 0.0) || options.iters < 1 || options.record_every < 1)
    throw std::invalid_argument("descent: lr, iters and record_every must be positive");

  DescentResult result;
  result.comparison_mode = spec.family != KernelFamily::coulomb;

  SampleSet q = init;
  double energy = mmd_unbiased(spec, targets, q);
  result.trajectory.push_back({0, energy, q.matrix()});

  for (int it = 1; it <= options.iters; ++it) {
    const Eigen::MatrixXd grad = mmd_grad_q(spec, targets, q);
    if (!options.safeguarded) {
      q.matrix() -= options.lr * grad;
      energy = mmd_unbiased(spec, targets, q);
    } else {
      Eigen::MatrixXd direction = -options.lr * grad;
      const Eigen::VectorXd caps = step_caps(q, targets);
      for (Eigen::Index i = 0; i < direction.cols(); ++i) {
        const double len = direction.col(i).norm();
        if (len > caps(i)) direction.col(i) *= caps(i) / len;
      }
      const double slope = (grad.array() * direction.array()).sum();
      // If no tried scale decreases the energy the iterate stays put.
      double t = 1.0;
      SampleSet trial = q;
      for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
        trial.matrix() = q.matrix() + t * direction;
        const double e = mmd_unbiased(spec, targets, trial);
        if (e <= energy + kArmijo * t * slope) {
          q = trial;
          energy = e;
          break;
        }
      }
    }
    if (!std::isfinite(energy))
      throw std::runtime_error("descent: energy became nonfinite at iteration " + std::to_string(it));
    if (it % options.record_every == 0 || it == options.iters) {
      if (result.trajectory.back().iter != it) result.trajectory.push_back({it, energy, q.matrix()});
    }
  }
  result.final_positions = std::move(q);
  return result;
}

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment: cost must be square");
  const auto n = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) -
                           u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t c = 1; c <= n; ++c) assignment[match[c] - 1] = c - 1;
  return assignment;
}

namespace {

bool search(const Eigen::MatrixXd& within, std::size_t row, std::vector<bool>& used,
            std::vector<std::size_t>& perm) {
  const auto n = static_cast<std::size_t>(within.rows());
  if (row == n) return true;
  for (std::size_t c = 0; c < n; ++c) {
    if (used[c] || within(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) == 0.0)
      continue;
    used[c] = true;
    perm[row] = c;
    if (search(within, row + 1, used, perm)) return true;
    used[c] = false;
  }
  return false;
}

}  // namespace

std::optional<std::vector<std::size_t>> match_permutation(const SampleSet& q,
                                                          const SampleSet& targets, double tol) {
  if (q.size() != targets.size() || q.dim() != targets.dim())
    throw std::invalid_argument("match_permutation: sets differ in size or dimension");
  const std::size_t n = q.size();
  Eigen::MatrixXd dist(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (q.point(i) - targets.point(j)).norm();

  std::vector<std::size_t> perm(n);
  if (n <= 8) {
    const Eigen::MatrixXd within = (dist.array() <= tol).cast<double>();
    std::vector<bool> used(n, false);
    if (search(within, 0, used, perm)) return perm;
    return std::nullopt;
  }
  perm = min_cost_assignment(dist);
  for (std::size_t i = 0; i < n; ++i)
    if (dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])) > tol)
      return std::nullopt;
  return perm;
}

void write_trajectory_csv(std::ostream& out, const DescentResult& result) {
  const auto& first = result.final_positions;
  out << "iter,energy";
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t d = 0; d < first.dim(); ++d) out << ",x" << i << '_' << d;
  out << '\n';
  for (const auto& rec : result.trajectory) {
    out << rec.iter << ',' << format_double(rec.energy);
    for (Eigen::Index i = 0; i < rec.positions.cols(); ++i)
      for (Eigen::Index d = 0; d < rec.positions.rows(); ++d)
        out << ',' << format_double(rec.positions(d, i));
    out << '\n';
  }
}

}  // namespace cae
