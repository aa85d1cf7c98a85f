#pragma once

#include "cae/sample_set.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace cae {

// Ten bandwidths logarithmically spaced over [1e-3, 10^1.5].
std::vector<double> default_bandwidths();

struct BandwidthScore {
  double bandwidth = 0.0;
  double mean_loglik = 0.0;
};

struct KdeResult {
  double best_bandwidth = 0.0;
  double best_loglik = 0.0;
  std::vector<BandwidthScore> scores;
};

// Mean log-likelihood of `test` under a Gaussian KDE on `generated`, for each
// bandwidth; the best bandwidth is picked on the test set itself.
KdeResult kde_loglik(const SampleSet& generated, const SampleSet& test, std::span<const double> bandwidths);

// Per-point log density for one bandwidth (log-sum-exp, fixed order).
std::vector<double> kde_log_density(const SampleSet& generated, const SampleSet& test, double bandwidth);

struct ModeCoverage {
  int covered = 0;
  std::vector<int> counts;      // samples whose nearest centre is this mode
  std::vector<int> near_counts; // of those, samples within `radius`
  std::vector<double> mean_distance;
};

// A mode is covered when at least `min_count` of the samples assigned to it
// lie within `radius` of its centre.
ModeCoverage mode_coverage(const SampleSet& samples, const SampleSet& centers, double radius = 0.15,
                           int min_count = 10);

// "bandwidth,mean_loglik" rows followed by a "# best ..." summary line.
void write_kde_csv(std::ostream& out, const KdeResult& result);

}  // namespace cae
