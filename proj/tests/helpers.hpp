#pragma once

#include <cmath>

#include "oracle.hpp"
#include "tqent/qstate.hpp"
#include "tqent/random.hpp"

namespace testing_support {

inline double max_diff(const tqent::CMatrix& a, const oracle::LMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, static_cast<double>(std::abs(oracle::lcplx(a(i, j)) - b[i][j])));
  return m;
}

inline std::vector<std::complex<double>> amplitudes_of(const tqent::PureState& psi) {
  return {psi.amplitudes().begin(), psi.amplitudes().end()};
}

// Random mixed state of the given rank: V diag(p) V^dagger with a Haar isometry.
inline tqent::DensityMatrix random_mixed(const tqent::Dims& dims, std::size_t rank, tqent::Rng& rng) {
  const std::size_t n = tqent::total_dimension(dims);
  const tqent::CMatrix v = tqent::haar_isometry(n, rank, rng);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(rank);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  tqent::CMatrix m(n, n);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) += w[k] / total * v(i, k) * std::conj(v(j, k));
  return tqent::DensityMatrix(dims, m);
}

}  // namespace testing_support
