#pragma once

#include <cstdint>
#include <random>

#include "tqent/linalg.hpp"

namespace tqent {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline CMatrix complex_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix z(rows, cols);
  for (auto& e : z.entries()) e = complex_gaussian(rng);
  return z;
}

// Haar-distributed m x r isometry (V^dagger V = I): QR of a complex Ginibre
// matrix with the R diagonal fixed positive.
inline CMatrix haar_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  for (;;) {
    try {
      return orthonormal_columns(complex_gaussian_matrix(rows, cols, rng));
    } catch (const DomainError&) {
      // measure-zero event; draw again
    }
  }
}

inline CMatrix haar_unitary(std::size_t n, Rng& rng) { return haar_isometry(n, n, rng); }

}  // namespace tqent
