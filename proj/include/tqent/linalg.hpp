#pragma once

// Dense complex linear algebra for the small matrices that appear in
// entanglement calculations (dimension <= 64).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tqent/error.hpp"

namespace tqent {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxMatrixEntries = 4096;

class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_size(rows, cols);
    data_.assign(rows * cols, cplx{});
  }

  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_size(rows, cols);
    if (data_.size() != rows * cols) {
      throw InvalidArgument("CMatrix: expected " + std::to_string(rows * cols) +
                            " entries, got " + std::to_string(data_.size()));
    }
  }

  // Row-major nested initializer, e.g. CMatrix{{1, 0}, {0, 1}}.
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    check_size(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidArgument("CMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const double> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static CMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  // |v><v|
  static CMatrix outer(std::span<const cplx> v) {
    CMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  CMatrix conjugate() const {
    CMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
  }

  cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  // max |M_ij - conj(M_ji)|; infinite for non-square input.
  double hermiticity_error() const {
    if (!is_square()) return INFINITY;
    double e = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return e;
  }

  bool is_hermitian(double tol = 1e-10) const { return hermiticity_error() <= tol; }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw InvalidArgument("CMatrix product: inner dimensions " + std::to_string(a.cols_) +
                            " and " + std::to_string(b.rows_) + " differ");
    }
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    a.require_same_shape(b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.data_.size(); ++k) m = std::max(m, std::abs(a.data_[k] - b.data_[k]));
    return m;
  }

  bool operator==(const CMatrix&) const = default;

 private:
  static void check_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw InvalidArgument("CMatrix: dimensions must be positive");
    if (rows > kMaxMatrixEntries || cols > kMaxMatrixEntries || rows * cols > kMaxMatrixEntries) {
      throw InvalidArgument("CMatrix: " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " exceeds the " + std::to_string(kMaxMatrixEntries) + "-entry limit");
    }
  }
  void require_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("CMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// Real eigenvalues, sorted descending.
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
};

struct EigenDecomposition {
  Spectrum spectrum;
  CMatrix vectors;  // column k is the eigenvector of spectrum.values[k]
};

namespace detail {

inline void require_hermitian(const CMatrix& m, const char* who) {
  if (!m.is_square()) {
    throw InvalidArgument(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  const double err = m.hermiticity_error();
  if (err > 1e-8) {
    throw InvalidArgument(std::string(who) + ": matrix is not Hermitian (max asymmetry " +
                          std::to_string(err) + ")");
  }
}

inline EigenDecomposition sorted_descending(std::vector<double> vals, const CMatrix& vecs) {
  const std::size_t n = vals.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  EigenDecomposition out{Spectrum{std::vector<double>(n)}, CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.spectrum.values[k] = vals[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vecs(i, order[k]);
  }
  return out;
}

// Closed form for 2x2 Hermitian [[a, b], [conj(b), d]].
inline EigenDecomposition eigen_2x2(const CMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  const double l1 = mean + radius;
  const double l2 = mean - radius;
  CMatrix v(2, 2);
  if (std::abs(b) == 0.0) {
    if (a >= d) {
      v(0, 0) = 1.0;
      v(1, 1) = 1.0;
    } else {
      v(1, 0) = 1.0;
      v(0, 1) = 1.0;
    }
    return EigenDecomposition{Spectrum{{l1, l2}}, v};
  }
  // Two algebraically equivalent null vectors of (M - l1); take the better conditioned one.
  cplx x0 = b, x1 = l1 - a;
  if (std::abs(l1 - d) > std::abs(l1 - a)) {
    x0 = l1 - d;
    x1 = std::conj(b);
  }
  const double nrm = std::sqrt(std::norm(x0) + std::norm(x1));
  x0 /= nrm;
  x1 /= nrm;
  v(0, 0) = x0;
  v(1, 0) = x1;
  v(0, 1) = -std::conj(x1);
  v(1, 1) = std::conj(x0);
  return EigenDecomposition{Spectrum{{l1, l2}}, v};
}

inline double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic complex Jacobi. Each rotation U = diag(1, e^{-i phi}) * R(theta)
// zeroes one off-diagonal pair; sweeps stop once the off-diagonal Frobenius
// norm drops to 1e-12 (relative to the matrix norm when that exceeds 1).
inline EigenDecomposition hermitian_eigen(const CMatrix& m) {
  detail::require_hermitian(m, "hermitian_eigen");
  const std::size_t n = m.rows();
  if (n == 1) return EigenDecomposition{Spectrum{{m(0, 0).real()}}, CMatrix::identity(1)};
  if (n == 2) return detail::eigen_2x2(m);

  CMatrix a = m;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  CMatrix w = CMatrix::identity(n);
  const double threshold = 1e-12 * std::max(1.0, a.frobenius_norm());

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag < 1e-300 || mag <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx phase_conj = std::conj(apq) / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx upp = c, upq = s, uqp = -s * phase_conj, uqq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx wkp = w(k, p), wkq = w(k, q);
          w(k, p) = wkp * upp + wkq * uqp;
          w(k, q) = wkp * upq + wkq * uqq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw ConvergenceError("hermitian_eigen: Jacobi sweeps did not converge");

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i).real();
  return detail::sorted_descending(std::move(vals), w);
}

inline Spectrum hermitian_eigenvalues(const CMatrix& m) { return hermitian_eigen(m).spectrum; }

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > kMaxMatrixEntries || cols > kMaxMatrixEntries || rows * cols > kMaxMatrixEntries) {
    throw InvalidArgument("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " exceeds the " + std::to_string(kMaxMatrixEntries) + "-entry limit");
  }
  CMatrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Unique PSD square root. Eigenvalues in [-1e-8, 0) are treated as round-off and clamped.
inline CMatrix psd_sqrt(const CMatrix& m) {
  const EigenDecomposition eig = hermitian_eigen(m);
  const std::size_t n = m.rows();
  if (eig.spectrum.values.back() < -1e-8) {
    throw DomainError("psd_sqrt: matrix has eigenvalue " + std::to_string(eig.spectrum.values.back()) +
                      " < -1e-8");
  }
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eig.spectrum.values[k]));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = eig.vectors(i, k) * root;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

// Q factor of a thin QR (modified Gram-Schmidt, two passes) with the R
// diagonal made real positive. Throws when the columns are numerically dependent.
inline CMatrix orthonormal_columns(const CMatrix& z) {
  if (z.cols() > z.rows()) throw InvalidArgument("orthonormal_columns: more columns than rows");
  CMatrix q = z;
  const std::size_t m = q.rows();
  for (std::size_t j = 0; j < q.cols(); ++j) {
    double original = 0.0;
    for (std::size_t i = 0; i < m; ++i) original += std::norm(q(i, j));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj{};
        for (std::size_t i = 0; i < m; ++i) proj += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < m; ++i) q(i, j) -= proj * q(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    if (!(nrm > 1e-12 * std::max(1.0, std::sqrt(original)))) {
      throw DomainError("orthonormal_columns: columns are linearly dependent");
    }
    for (std::size_t i = 0; i < m; ++i) q(i, j) /= nrm;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Subsystem bookkeeping. The first subsystem is the most significant digit of
// the composite index (Kronecker order).

using Dims = std::vector<std::size_t>;
using Subsystems = std::vector<std::size_t>;

inline std::size_t total_dimension(std::span<const std::size_t> dims) {
  std::size_t d = 1;
  for (auto x : dims) d *= x;
  return d;
}

namespace detail {

// Validates `keep` against `dims` and returns it deduplicated in original order.
inline Subsystems normalize_keep(std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
  if (keep.empty()) throw InvalidArgument("partial trace: keep set is empty");
  Subsystems sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("partial trace: keep set has duplicate subsystem indices");
  }
  if (sorted.back() >= dims.size()) {
    throw InvalidArgument("partial trace: subsystem index " + std::to_string(sorted.back()) +
                          " out of range for " + std::to_string(dims.size()) + " subsystems");
  }
  return sorted;
}

// For every composite index, its (kept, traced) coordinates, with the kept
// block ordered as listed in `order`.
struct SplitIndex {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

inline SplitIndex split_index(std::span<const std::size_t> dims, std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  std::vector<bool> is_kept(n, false);
  for (auto k : order) is_kept[k] = true;
  SplitIndex s;
  std::vector<std::size_t> kept_stride(n, 0), traced_stride(n, 0);
  // strides within the kept block follow `order`; traced block follows original order
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    kept_stride[*it] = s.kept_dim;
    s.kept_dim *= dims[*it];
  }
  for (std::size_t k = n; k-- > 0;) {
    if (is_kept[k]) continue;
    traced_stride[k] = s.traced_dim;
    s.traced_dim *= dims[k];
  }
  const std::size_t total = s.kept_dim * s.traced_dim;
  s.kept.assign(total, 0);
  s.traced.assign(total, 0);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t ki = 0, ti = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (is_kept[k]) ki += digit[k] * kept_stride[k];
      else ti += digit[k] * traced_stride[k];
    }
    s.kept[idx] = ki;
    s.traced[idx] = ti;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }
  return s;
}

}  // namespace detail

// Partial trace of an operator on a composite space; kept subsystems appear in
// `keep` order (callers pass a sorted set to preserve the original order).
inline CMatrix partial_trace_ordered(const CMatrix& m, std::span<const std::size_t> dims,
                                     std::span<const std::size_t> keep) {
  const std::size_t total = total_dimension(dims);
  if (!m.is_square() || m.rows() != total) {
    throw InvalidArgument("partial trace: matrix size " + std::to_string(m.rows()) +
                          " does not match subsystem dimensions (product " + std::to_string(total) + ")");
  }
  (void)detail::normalize_keep(dims, keep);
  const detail::SplitIndex s = detail::split_index(dims, keep);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_traced(s.traced_dim);
  for (std::size_t idx = 0; idx < total; ++idx) by_traced[s.traced[idx]].emplace_back(s.kept[idx], idx);
  CMatrix out(s.kept_dim, s.kept_dim);
  for (const auto& group : by_traced)
    for (const auto& [ki, i] : group)
      for (const auto& [kj, j] : group) out(ki, kj) += m(i, j);
  return out;
}

inline CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                             std::span<const std::size_t> keep) {
  const Subsystems sorted = detail::normalize_keep(dims, keep);
  return partial_trace_ordered(m, dims, sorted);
}

}  // namespace tqent
