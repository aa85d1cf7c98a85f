#include "cae/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cae/io_format.hpp"

namespace cae {

namespace {

void check_pair(const SampleSet& p, const SampleSet& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("mmd: sample sets differ in dimension");
  if (p.size() < 2 || q.size() < 2)
    throw std::invalid_argument("mmd: unbiased estimate needs at least two points per set");
}

double squared_distance(const SampleSet& a, std::size_t i, const SampleSet& b, std::size_t j) {
  return (a.point(i) - b.point(j)).squaredNorm();
}

// sum over i != j, visiting pairs row-major and counting each unordered pair twice.
double self_sum(const Kernel& k, const SampleSet& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) total += k.value(squared_distance(s, i, s, j));
  return 2.0 * total;
}

double cross_sum(const Kernel& k, const SampleSet& a, const SampleSet& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) total += k.value(squared_distance(a, i, b, j));
  return total;
}

}  // namespace

double mmd_unbiased(const KernelSpec& spec, const SampleSet& p, const SampleSet& q) {
  check_pair(p, q);
  const Kernel k(spec);
  const double np = static_cast<double>(p.size());
  const double nq = static_cast<double>(q.size());
  return self_sum(k, p) / (np * (np - 1.0)) - 2.0 * cross_sum(k, p, q) / (np * nq) +
         self_sum(k, q) / (nq * (nq - 1.0));
}

Eigen::MatrixXd mmd_grad_q(const KernelSpec& spec, const SampleSet& p, const SampleSet& q) {
  check_pair(p, q);
  const Kernel k(spec);
  const double np = static_cast<double>(p.size());
  const double nq = static_cast<double>(q.size());
  const double self_coef = 2.0 / (nq * (nq - 1.0));
  const double cross_coef = -2.0 / (np * nq);

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q.dim()),
                                               static_cast<Eigen::Index>(q.size()));
  // Antisymmetry of the pair gradient lets each unordered free pair be visited once.
  const Eigen::MatrixXd& qm = q.matrix();
  const Eigen::MatrixXd& pm = p.matrix();
  const Eigen::Index dim = qm.rows();
  for (Eigen::Index i = 0; i < qm.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < qm.cols(); ++j) {
      const double c = self_coef * k.grad_scale((qm.col(i) - qm.col(j)).squaredNorm());
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double g = c * (qm(d, i) - qm(d, j));
        grad(d, i) += g;
        grad(d, j) -= g;
      }
    }
  }
  for (Eigen::Index i = 0; i < qm.cols(); ++i) {
    for (Eigen::Index j = 0; j < pm.cols(); ++j) {
      const double c = cross_coef * k.grad_scale((qm.col(i) - pm.col(j)).squaredNorm());
      for (Eigen::Index d = 0; d < dim; ++d) grad(d, i) += c * (qm(d, i) - pm(d, j));
    }
  }
  return grad;
}

void ChargeSystem::validate() const {
  if (positions.size() != charges.size())
    throw std::invalid_argument("ChargeSystem: positions and charges differ in length");
}

double charge_energy(const KernelSpec& spec, const ChargeSystem& sys) {
  sys.validate();
  const Kernel k(spec);
  double total = 0.0;
  for (std::size_t i = 0; i < sys.charges.size(); ++i)
    for (std::size_t j = i + 1; j < sys.charges.size(); ++j)
      total += sys.charges[i] * sys.charges[j] *
               k.value(squared_distance(sys.positions, i, sys.positions, j));
  return total;
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0) || !(max > min)) throw std::invalid_argument("grid: need max > min and step > 0");
  const auto count = static_cast<std::size_t>(std::llround((max - min) / step)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = min + static_cast<double>(i) * step;
  return grid;
}

Landscape landscape_scan(const KernelSpec& spec, const ChargeSystem& fixed, int n_free,
                         std::span<const double> grid) {
  fixed.validate();
  if (n_free != 1 && n_free != 2) throw std::invalid_argument("landscape: n_free must be 1 or 2");
  if (fixed.positions.dim() != 1 && !fixed.positions.empty())
    throw std::invalid_argument("landscape: fixed charges must be one-dimensional");
  if (std::any_of(fixed.charges.begin(), fixed.charges.end(), [](double c) { return c <= 0.0; }))
    throw std::invalid_argument("landscape: fixed charges must be positive");
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("landscape: grid must be strictly increasing");

  const Kernel k(spec);
  const std::size_t nf = fixed.charges.size();
  double base = 0.0;
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i + 1; j < nf; ++j)
      base += fixed.charges[i] * fixed.charges[j] *
              k.value(squared_distance(fixed.positions, i, fixed.positions, j));

  // Interaction of one unit negative charge at z with the fixed charges;
  // NaN marks a singular cell.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto attraction = [&](double z) {
    double e = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      const double d = z - fixed.positions(0, i);
      try {
        e -= fixed.charges[i] * k.value(d * d);
      } catch (const SingularityError&) {
        return nan;
      }
    }
    return e;
  };

  Landscape out;
  out.n_free = n_free;
  out.grid.assign(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  if (n_free == 1) {
    out.energy.resize(n);
    out.singular.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = attraction(grid[i]);
      out.singular[i] = std::isnan(e);
      out.energy[i] = out.singular[i] ? nan : base + e;
    }
    return out;
  }

  std::vector<double> single(n);
  for (std::size_t i = 0; i < n; ++i) single[i] = attraction(grid[i]);
  out.energy.assign(n * n, nan);
  out.singular.assign(n * n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::isnan(single[i]) || std::isnan(single[j])) continue;
      const double d = grid[i] - grid[j];
      double pair = 0.0;
      try {
        pair = k.value(d * d);  // (-1)(-1) k(z1, z2)
      } catch (const SingularityError&) {
        continue;
      }
      const double e = base + single[i] + single[j] + pair;
      out.energy[i * n + j] = out.energy[j * n + i] = e;
      out.singular[i * n + j] = out.singular[j * n + i] = false;
    }
  }
  return out;
}

std::vector<std::size_t> local_minima(std::span<const double> values) {
  if (values.size() < 3) throw std::invalid_argument("local minima: need at least 3 values");
  std::vector<std::size_t> minima;
  std::size_t i = 1;
  while (i + 1 < values.size()) {
    if (!(values[i] < values[i - 1])) {
      ++i;
      continue;
    }
    // Strict descent into i; walk across any plateau.
    std::size_t end = i;
    while (end + 1 < values.size() && values[end + 1] == values[i]) ++end;
    if (end + 1 < values.size() && values[end + 1] > values[i]) minima.push_back(i);
    i = end + 1;
  }
  return minima;
}

std::size_t count_local_minima(std::span<const double> values) {
  return local_minima(values).size();
}

std::vector<std::size_t> landscape_local_minima(const Landscape& landscape) {
  if (landscape.n_free != 1) throw std::invalid_argument("local minima: landscape must be 1-D");
  std::vector<double> kept;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < landscape.energy.size(); ++i) {
    if (landscape.singular[i]) continue;
    kept.push_back(landscape.energy[i]);
    index.push_back(i);
  }
  std::vector<std::size_t> out;
  for (std::size_t m : local_minima(kept)) out.push_back(index[m]);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> global_minimum_cells(const Landscape& landscape) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < landscape.energy.size(); ++c)
    if (!landscape.singular[c]) best = std::min(best, landscape.energy[c]);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  const std::size_t n = landscape.grid.size();
  for (std::size_t c = 0; c < landscape.energy.size(); ++c) {
    if (landscape.singular[c] || landscape.energy[c] != best) continue;
    if (landscape.n_free == 1)
      cells.emplace_back(c, 0);
    else
      cells.emplace_back(c / n, c % n);
  }
  return cells;
}

void write_landscape_csv(std::ostream& out, const Landscape& landscape) {
  const std::size_t n = landscape.grid.size();
  if (landscape.n_free == 1) {
    out << "z,energy\n";
    for (std::size_t i = 0; i < n; ++i)
      out << format_double(landscape.grid[i]) << ',' << format_double(landscape.energy[i]) << '\n';
    return;
  }
  out << "z1,z2,energy\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out << format_double(landscape.grid[i]) << ',' << format_double(landscape.grid[j]) << ','
          << format_double(landscape.at(i, j)) << '\n';
}

}  // namespace cae
