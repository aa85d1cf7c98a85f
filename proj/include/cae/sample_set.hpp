#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cae {

using Point = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

// Ordered collection of equal-dimension points, stored one point per column
// so that a set can be fed to a network as a (dim x count) batch directly.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(std::size_t dim, std::size_t count)
      : data_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                    static_cast<Eigen::Index>(count))) {}
  explicit SampleSet(Eigen::MatrixXd columns) : data_(std::move(columns)) {}

  static SampleSet from_points(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("SampleSet: no points");
    SampleSet out(points.front().size(), points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != out.dim())
        throw std::invalid_argument("SampleSet: ragged point dimensions");
      for (std::size_t d = 0; d < out.dim(); ++d)
        out.data_(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = points[i][d];
    }
    return out;
  }

  // Convenience for 1-D sets.
  static SampleSet from_scalars(const std::vector<double>& values) {
    SampleSet out(1, values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      out.data_(0, static_cast<Eigen::Index>(i)) = values[i];
    return out;
  }

  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(data_.cols()); }
  bool empty() const { return data_.cols() == 0; }

  auto point(std::size_t i) const { return data_.col(static_cast<Eigen::Index>(i)); }
  auto point(std::size_t i) { return data_.col(static_cast<Eigen::Index>(i)); }
  double operator()(std::size_t d, std::size_t i) const {
    return data_(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i));
  }

  const Eigen::MatrixXd& matrix() const { return data_; }
  Eigen::MatrixXd& matrix() { return data_; }

  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Eigen::MatrixXd data_;
};

}  // namespace cae
