#include "srw/stochastic_vector.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "srw/error.hpp"

namespace srw {

StochasticVector::StochasticVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorCode::InvalidVector, "empty probability vector");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "entry " << i << " = " << v << " is not a probability";
      throw Error(ErrorCode::InvalidVector, os.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTol) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << sum;
    throw Error(ErrorCode::InvalidVector, os.str());
  }
}

StochasticVector StochasticVector::renormalized(std::vector<double> values) {
  double sum = 0.0;
  for (double& v : values) {
    if (!std::isfinite(v) || v < -kStochasticTol) {
      std::ostringstream os;
      os << "entry " << v << " cannot be renormalized onto the simplex";
      throw Error(ErrorCode::InvalidVector, os.str());
    }
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::InvalidVector, "vector has zero mass");
  }
  for (double& v : values) v /= sum;
  return StochasticVector(Unchecked{}, std::move(values));
}

StochasticVector StochasticVector::renormalized(const Eigen::VectorXd& values) {
  return renormalized(std::vector<double>(values.data(), values.data() + values.size()));
}

StochasticVector StochasticVector::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidVector, "empty probability vector");
  return StochasticVector(Unchecked{}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

StochasticVector StochasticVector::unit(std::size_t n, std::size_t k) {
  if (k >= n) throw Error(ErrorCode::IndexOutOfRange, "unit vector index out of range");
  std::vector<double> v(n, 0.0);
  v[k] = 1.0;
  return StochasticVector(Unchecked{}, std::move(v));
}

Eigen::VectorXd StochasticVector::to_eigen() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "l1_distance length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace srw
