#include "cae/data.hpp"

#include "cae/io_format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string_view>
#include <vector>

namespace cae {

SampleSet grid_centers() {
  SampleSet centers(2, 25);
  std::size_t k = 0;
  for (int ix = -2; ix <= 2; ++ix)
    for (int iy = -2; iy <= 2; ++iy, ++k) {
      centers.point(k)(0) = 2.0 * ix;
      centers.point(k)(1) = 2.0 * iy;
    }
  return centers;
}

SampleSet grid_dataset(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("grid_dataset: n must be >= 1");
  const SampleSet centers = grid_centers();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
  std::normal_distribution<double> noise(0.0, kGridNoiseSigma);
  SampleSet out(2, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    const double dx = noise(rng);
    const double dy = noise(rng);
    out.point(i)(0) = centers(0, c) + dx;
    out.point(i)(1) = centers(1, c) + dy;
  }
  return out;
}

SampleSet gaussian_prior_sample(std::size_t n, std::size_t h, std::uint64_t seed) {
  if (n == 0 || h == 0) throw std::invalid_argument("gaussian_prior_sample: n and h must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleSet out(h, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < h; ++d) out.point(i)(static_cast<Eigen::Index>(d)) = normal(rng);
  return out;
}

void write_samples_csv(std::ostream& out, const SampleSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t d = 0; d < set.dim(); ++d) out << (d ? "," : "") << format_double(set(d, i));
    out << '\n';
  }
}

SampleSet read_samples_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t fields = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      const auto v = parse_double(field);
      if (!v) throw CsvParseError("malformed number '" + std::string(field) + "'", line_no);
      values.push_back(*v);
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (dim == 0)
      dim = fields;
    else if (fields != dim)
      throw CsvParseError("expected " + std::to_string(dim) + " fields, found " + std::to_string(fields),
                          line_no);
    ++rows;
  }
  if (rows == 0) throw CsvParseError("no samples: cannot determine dimension", line_no);
  SampleSet out(dim, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t d = 0; d < dim; ++d)
      out.point(i)(static_cast<Eigen::Index>(d)) = values[i * dim + d];
  return out;
}

void save_samples_csv(const std::string& path, const SampleSet& set) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_samples_csv(out, set);
}

SampleSet load_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_samples_csv(in);
}

}  // namespace cae
