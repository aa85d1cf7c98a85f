#pragma once

#include "cae/sample_set.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace cae {

// 25 centres on {-4,-2,0,2,4}^2, row-major in (x, y).
SampleSet grid_centers();

inline constexpr double kGridNoiseSigma = 0.05;

// Mixture of isotropic Gaussians (sigma 0.05) on the 5x5 grid, uniform over centres.
SampleSet grid_dataset(std::size_t n, std::uint64_t seed);

// n i.i.d. draws from N(0, I_h).
SampleSet gaussian_prior_sample(std::size_t n, std::size_t h, std::uint64_t seed);

class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One point per row, comma separated, 17 significant digits; no header.
void write_samples_csv(std::ostream& out, const SampleSet& set);
SampleSet read_samples_csv(std::istream& in);
void save_samples_csv(const std::string& path, const SampleSet& set);
SampleSet load_samples_csv(const std::string& path);

}  // namespace cae
