#include "cae/eval.hpp"

#include "cae/io_format.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace cae {

std::vector<double> default_bandwidths() {
  std::vector<double> out(10);
  for (int i = 0; i < 10; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 4.5 * i / 9.0);
  return out;
}

namespace {

void check_sets(const SampleSet& generated, const SampleSet& test) {
  if (generated.empty() || test.empty()) throw std::invalid_argument("kde: sample sets must be nonempty");
  if (generated.dim() != test.dim()) throw std::invalid_argument("kde: dimension mismatch");
}

// log (1/m) sum_j N(x; g_j, b^2 I) given the squared distances to every g_j.
double log_density(const Eigen::ArrayXd& dist_sq, double min_dist_sq, double bandwidth, std::size_t dim) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  const double sum = (-(dist_sq - min_dist_sq) * inv).exp().sum();
  const double m = static_cast<double>(dist_sq.size());
  return std::log(sum) - min_dist_sq * inv - std::log(m) -
         0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi * bandwidth * bandwidth);
}

template <typename Visit>
void for_each_test_point(const SampleSet& generated, const SampleSet& test, Visit&& visit) {
  const Eigen::MatrixXd& g = generated.matrix();
  const Eigen::ArrayXd g_norms = g.colwise().squaredNorm().transpose().array();
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto x = test.point(i);
    Eigen::ArrayXd d2 = g_norms - 2.0 * (g.transpose() * x).array() + x.squaredNorm();
    d2 = d2.max(0.0);
    visit(i, d2, d2.minCoeff());
  }
}

}  // namespace

std::vector<double> kde_log_density(const SampleSet& generated, const SampleSet& test, double bandwidth) {
  check_sets(generated, test);
  if (!(bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be > 0");
  std::vector<double> out(test.size());
  for_each_test_point(generated, test, [&](std::size_t i, const Eigen::ArrayXd& d2, double dmin) {
    out[i] = log_density(d2, dmin, bandwidth, test.dim());
  });
  return out;
}

KdeResult kde_loglik(const SampleSet& generated, const SampleSet& test, std::span<const double> bandwidths) {
  check_sets(generated, test);
  if (bandwidths.empty()) throw std::invalid_argument("kde: need at least one bandwidth");
  for (double b : bandwidths)
    if (!(b > 0.0)) throw std::invalid_argument("kde: bandwidths must be > 0");
  std::vector<double> sums(bandwidths.size(), 0.0);
  for_each_test_point(generated, test, [&](std::size_t, const Eigen::ArrayXd& d2, double dmin) {
    for (std::size_t k = 0; k < bandwidths.size(); ++k) sums[k] += log_density(d2, dmin, bandwidths[k], test.dim());
  });
  KdeResult res;
  res.best_loglik = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bandwidths.size(); ++k) {
    const double mean = sums[k] / static_cast<double>(test.size());
    res.scores.push_back({bandwidths[k], mean});
    if (mean > res.best_loglik) {
      res.best_loglik = mean;
      res.best_bandwidth = bandwidths[k];
    }
  }
  return res;
}

ModeCoverage mode_coverage(const SampleSet& samples, const SampleSet& centers, double radius, int min_count) {
  if (samples.empty() || centers.empty()) throw std::invalid_argument("mode_coverage: empty input");
  if (samples.dim() != centers.dim()) throw std::invalid_argument("mode_coverage: dimension mismatch");
  if (!(radius > 0.0) || min_count < 1)
    throw std::invalid_argument("mode_coverage: radius and min_count must be positive");
  ModeCoverage out;
  out.counts.assign(centers.size(), 0);
  out.near_counts.assign(centers.size(), 0);
  out.mean_distance.assign(centers.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d2 = (samples.point(i) - centers.point(c)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    const double d = std::sqrt(best_d2);
    out.counts[best] += 1;
    out.mean_distance[best] += d;
    if (d <= radius) out.near_counts[best] += 1;
  }
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (out.counts[c] > 0) out.mean_distance[c] /= out.counts[c];
    if (out.near_counts[c] >= min_count) ++out.covered;
  }
  return out;
}

void write_kde_csv(std::ostream& out, const KdeResult& result) {
  out << "bandwidth,mean_loglik\n";
  for (const auto& s : result.scores) out << format_double(s.bandwidth) << ',' << format_double(s.mean_loglik) << '\n';
  out << "# best bandwidth=" << format_double(result.best_bandwidth)
      << " mean_loglik=" << format_double(result.best_loglik) << '\n';
}

}  // namespace cae
