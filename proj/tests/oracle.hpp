#pragma once

// Test-only reference routines. Everything here is written from the
// definitions with no calls into the library's numerical paths, so the
// tests compare two independent routes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using lcplx = std::complex<long double>;
using LMatrix = std::vector<std::vector<lcplx>>;

// Constants computed once with 50-digit mpmath and frozen here.
inline constexpr double kCriticalLow = 0.69722436226800535;   // (5 - sqrt 13)/2
inline constexpr double kCriticalHigh = 4.3027756377319946;   // (5 + sqrt 13)/2
inline constexpr double kAntisymmetricRoot = 1.619194744390992;
inline constexpr double kQutritTwoQubitRoot = 2.471370753410185;

inline std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

// rho_keep[i][j] = sum over traced digits of psi(i, t) conj(psi(j, t)), by
// brute-force enumeration of every pair of basis states.
inline LMatrix partial_trace(const std::vector<std::complex<double>>& amps, const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& keep) {
  std::size_t kd = 1;
  for (auto k : keep) kd *= dims[k];
  LMatrix out(kd, std::vector<lcplx>(kd));
  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t idx = 0;
    for (auto k : keep) idx = idx * dims[k] + d[k];
    return idx;
  };
  for (std::size_t a = 0; a < amps.size(); ++a) {
    const auto da = digits_of(a, dims);
    for (std::size_t b = 0; b < amps.size(); ++b) {
      const auto db = digits_of(b, dims);
      bool same_traced = true;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && da[k] != db[k]) same_traced = false;
      }
      if (!same_traced) continue;
      out[kept_index(da)][kept_index(db)] += lcplx(amps[a]) * std::conj(lcplx(amps[b]));
    }
  }
  return out;
}

inline LMatrix multiply(const LMatrix& a, const LMatrix& b) {
  const std::size_t n = a.size();
  LMatrix out(n, std::vector<lcplx>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Tr(rho^n) by repeated multiplication.
inline long double trace_power(const LMatrix& rho, int n) {
  LMatrix p = rho;
  for (int i = 1; i < n; ++i) p = multiply(p, rho);
  long double t = 0;
  for (std::size_t i = 0; i < p.size(); ++i) t += p[i][i].real();
  return t;
}

// Tsallis entropy for integer q >= 2 through trace powers.
inline long double tsallis_integer(const LMatrix& rho, int q) { return (1.0L - trace_power(rho, q)) / (q - 1); }

inline long double tsallis_spectrum(const std::vector<long double>& p, long double q) {
  long double s = 0;
  if (q == 1.0L) {
    for (auto x : p)
      if (x > 0) s -= x * std::log(x);
    return s;
  }
  for (auto x : p) s += std::pow(x, q);
  return (1.0L - s) / (q - 1.0L);
}

// f_q from its definition as the entropy of the marginal spectrum of a pure
// two-qubit state with squared concurrence x.
inline long double f_q(long double x, long double q) {
  const long double s = std::sqrt(1.0L - x);
  return tsallis_spectrum({(1.0L + s) / 2.0L, (1.0L - s) / 2.0L}, q);
}

// Pure two-qubit concurrence 2|a d - b c|.
inline double pure_pair_concurrence(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                                    std::complex<double> d) {
  return 2.0 * std::abs(a * d - b * c);
}

// Isotropic two-qubit state p |Phi+><Phi+| + (1 - p) I/4 has C = max(0, (3p - 1)/2).
inline double isotropic_concurrence(double p) { return std::max(0.0, (3.0 * p - 1.0) / 2.0); }

// Central second difference in long double with one Richardson step.
inline long double second_derivative(const std::function<long double(long double)>& f, long double x, long double h) {
  auto d = [&](long double step) { return (f(x + step) - 2.0L * f(x) + f(x - step)) / (step * step); };
  return (4.0L * d(h / 2.0L) - d(h)) / 3.0L;
}

}  // namespace oracle
