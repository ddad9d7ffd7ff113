#include "multiassoc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace multiassoc {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the log argument away from zero.
  double u = 1.0 - uniform01();
  double v = uniform01();
  double r = std::sqrt(-2.0 * std::log(u));
  double theta = 2.0 * 3.14159265358979323846 * v;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> Rng::unit_vector(size_t dim) {
  std::vector<double> v(dim);
  while (true) {
    double norm_sq = 0.0;
    for (auto& x : v) {
      x = normal();
      norm_sq += x * x;
    }
    if (norm_sq > 1e-24) {
      double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

std::vector<size_t> Rng::sample_indices(size_t n, size_t k) {
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), size_t{0});
  if (k >= n) return all;
  // Partial Fisher-Yates: the first k slots end up holding the sample.
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + bounded(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace multiassoc
