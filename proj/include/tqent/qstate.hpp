#pragma once

// Pure and mixed state containers, reductions, and the catalog of named states.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tqent/linalg.hpp"
#include "tqent/random.hpp"

namespace tqent {

namespace detail {

inline void validate_dims(const Dims& dims, std::size_t length, const char* who) {
  if (dims.empty()) throw InvalidArgument(std::string(who) + ": dims must be nonempty");
  for (auto d : dims) {
    if (d < 2) throw InvalidArgument(std::string(who) + ": every subsystem dimension must be >= 2");
  }
  const std::size_t total = total_dimension(dims);
  if (total != length) {
    throw InvalidArgument(std::string(who) + ": dims multiply to " + std::to_string(total) + " but " +
                          std::to_string(length) + " entries were given");
  }
}

inline std::string dims_string(const Dims& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

}  // namespace detail

class PureState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  PureState(Dims dims, std::vector<cplx> amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    detail::validate_dims(dims_, amps_.size(), "PureState");
    const double n2 = norm_squared(amps_);
    if (std::abs(n2 - 1.0) > kNormTolerance) {
      throw DomainError("PureState: squared norm is " + std::to_string(n2) + ", expected 1");
    }
  }

  // Rescales to unit norm; fails on a (numerically) zero vector.
  static PureState normalized(Dims dims, std::vector<cplx> amplitudes) {
    detail::validate_dims(dims, amplitudes.size(), "PureState");
    const double nrm = std::sqrt(norm_squared(amplitudes));
    if (!(nrm > 1e-12)) throw DomainError("PureState: amplitude vector has zero norm (degenerate input)");
    for (auto& a : amplitudes) a /= nrm;
    return PureState(std::move(dims), std::move(amplitudes));
  }

  const Dims& dims() const { return dims_; }
  std::size_t num_subsystems() const { return dims_.size(); }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  bool is_qubits() const {
    return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 2; });
  }

  CMatrix projector() const { return CMatrix::outer(amps_); }

  static double norm_squared(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return s;
  }

 private:
  Dims dims_;
  std::vector<cplx> amps_;
};

class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-9;
  static constexpr double kHermitianTolerance = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-9;

  DensityMatrix(Dims dims, CMatrix matrix) : DensityMatrix(std::move(dims), std::move(matrix), true) {}

  // Skips the eigenvalue (PSD) test; shape, Hermiticity and trace are still
  // checked. For operators that are PSD by construction (reductions, mixtures).
  static DensityMatrix from_trusted(Dims dims, CMatrix matrix) {
    return DensityMatrix(std::move(dims), std::move(matrix), false);
  }

  static DensityMatrix from_pure(const PureState& psi) { return from_trusted(psi.dims(), psi.projector()); }

  const Dims& dims() const { return dims_; }
  std::size_t num_subsystems() const { return dims_.size(); }
  std::size_t dimension() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

  Spectrum spectrum() const { return hermitian_eigenvalues(m_); }

  std::size_t rank(double tol = 1e-10) const {
    const Spectrum s = spectrum();
    return static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(), [&](double v) { return v > tol; }));
  }

  bool is_qubits() const {
    return std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 2; });
  }

 private:
  DensityMatrix(Dims dims, CMatrix matrix, bool check_psd) : dims_(std::move(dims)), m_(std::move(matrix)) {
    if (!m_.is_square()) throw InvalidArgument("DensityMatrix: matrix must be square");
    detail::validate_dims(dims_, m_.rows(), "DensityMatrix");
    const double herr = m_.hermiticity_error();
    if (herr > kHermitianTolerance) {
      throw DomainError("DensityMatrix: not Hermitian (max asymmetry " + std::to_string(herr) + ")");
    }
    // Exact Hermitian symmetrization of the round-off that passed the check.
    for (std::size_t i = 0; i < m_.rows(); ++i) {
      m_(i, i) = m_(i, i).real();
      for (std::size_t j = i + 1; j < m_.cols(); ++j) {
        const cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
      throw DomainError("DensityMatrix: trace is " + std::to_string(tr) + ", expected 1");
    }
    if (check_psd) {
      const double lowest = hermitian_eigenvalues(m_).values.back();
      if (lowest < kEigenvalueFloor) {
        throw DomainError("DensityMatrix: eigenvalue " + std::to_string(lowest) + " is negative");
      }
    }
  }

  Dims dims_;
  CMatrix m_;
};

struct EnsembleMember {
  double weight;
  PureState state;
};

// Weighted pure-state ensemble {p_i, |psi_i>}.
class Decomposition {
 public:
  static constexpr double kWeightTolerance = 1e-9;

  explicit Decomposition(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("Decomposition: no members");
    double total = 0.0;
    for (const auto& m : members_) {
      if (!(m.weight > 0.0)) throw DomainError("Decomposition: weights must be positive");
      if (m.state.dims() != members_.front().state.dims()) {
        throw InvalidArgument("Decomposition: members have different dims");
      }
      total += m.weight;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
      throw DomainError("Decomposition: weights sum to " + std::to_string(total));
    }
  }

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Dims& dims() const { return members_.front().state.dims(); }

  CMatrix reconstruct() const {
    const std::size_t d = members_.front().state.dimension();
    CMatrix rho(d, d);
    for (const auto& m : members_) {
      const auto a = m.state.amplitudes();
      for (std::size_t i = 0; i < d; ++i) {
        const cplx ai = m.weight * a[i];
        for (std::size_t j = 0; j < d; ++j) rho(i, j) += ai * std::conj(a[j]);
      }
    }
    return rho;
  }

  // max-entry distance between sum_i p_i |psi_i><psi_i| and rho
  double reconstruction_error(const DensityMatrix& rho) const { return max_abs_diff(reconstruct(), rho.matrix()); }

 private:
  std::vector<EnsembleMember> members_;
};

// ---------------------------------------------------------------------------
// Reductions

// Precomputed split of a composite space into a kept block (in the listed
// order) and the traced remainder, for repeated reductions of pure states.
class Bipartition {
 public:
  Bipartition(Dims dims, Subsystems keep) : dims_(std::move(dims)), keep_(std::move(keep)) {
    (void)detail::normalize_keep(dims_, keep_);
    split_ = detail::split_index(dims_, keep_);
  }

  const Dims& dims() const { return dims_; }
  const Subsystems& kept() const { return keep_; }
  std::size_t kept_dim() const { return split_.kept_dim; }
  std::size_t traced_dim() const { return split_.traced_dim; }

  // Psi with Psi(k, t) = <k, t|psi>: rows index the kept block, columns the rest.
  CMatrix coefficients(std::span<const cplx> amps) const {
    check_length(amps);
    CMatrix psi(split_.kept_dim, split_.traced_dim);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) psi(split_.kept[idx], split_.traced[idx]) = amps[idx];
    return psi;
  }

  // rho_keep = Psi Psi^dagger, Psi the kept x traced coefficient matrix.
  CMatrix kept_marginal(std::span<const cplx> amps) const {
    check_length(amps);
    const std::size_t dk = split_.kept_dim;
    std::vector<cplx> psi(dk * split_.traced_dim);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) psi[split_.kept[idx] * split_.traced_dim + split_.traced[idx]] = amps[idx];
    CMatrix rho(dk, dk);
    for (std::size_t i = 0; i < dk; ++i)
      for (std::size_t j = i; j < dk; ++j) {
        cplx s{};
        for (std::size_t t = 0; t < split_.traced_dim; ++t)
          s += psi[i * split_.traced_dim + t] * std::conj(psi[j * split_.traced_dim + t]);
        rho(i, j) = s;
        rho(j, i) = std::conj(s);
      }
    return rho;
  }

  // Reduced state of the complement (original subsystem order).
  CMatrix traced_marginal(std::span<const cplx> amps) const {
    check_length(amps);
    const std::size_t dt = split_.traced_dim;
    std::vector<cplx> psi(split_.kept_dim * dt);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) psi[split_.kept[idx] * dt + split_.traced[idx]] = amps[idx];
    CMatrix rho(dt, dt);
    for (std::size_t s1 = 0; s1 < dt; ++s1)
      for (std::size_t s2 = s1; s2 < dt; ++s2) {
        cplx s{};
        for (std::size_t k = 0; k < split_.kept_dim; ++k) s += psi[k * dt + s1] * std::conj(psi[k * dt + s2]);
        rho(s1, s2) = s;
        rho(s2, s1) = std::conj(s);
      }
    return rho;
  }

  // Either marginal has the same nonzero spectrum; return the smaller one.
  CMatrix smaller_marginal(std::span<const cplx> amps) const {
    return split_.kept_dim <= split_.traced_dim ? kept_marginal(amps) : traced_marginal(amps);
  }

 private:
  void check_length(std::span<const cplx> amps) const {
    if (amps.size() != split_.kept.size()) throw InvalidArgument("Bipartition: amplitude length mismatch");
  }

  Dims dims_;
  Subsystems keep_;
  detail::SplitIndex split_;
};

namespace detail {
inline Dims select_dims(const Dims& dims, std::span<const std::size_t> order) {
  Dims out;
  for (auto k : order) out.push_back(dims[k]);
  return out;
}
}  // namespace detail

// Reduced state on `keep`, subsystems in original order.
inline DensityMatrix reduced_state(const PureState& psi, std::span<const std::size_t> keep) {
  const Subsystems sorted = detail::normalize_keep(psi.dims(), keep);
  const Bipartition cut(psi.dims(), sorted);
  return DensityMatrix::from_trusted(detail::select_dims(psi.dims(), sorted), cut.kept_marginal(psi.amplitudes()));
}

inline DensityMatrix reduced_state(const PureState& psi, std::initializer_list<std::size_t> keep) {
  return reduced_state(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

// Reduced state with the kept subsystems arranged in the given order.
inline DensityMatrix reduced_state_ordered(const PureState& psi, const Subsystems& order) {
  const Bipartition cut(psi.dims(), order);
  return DensityMatrix::from_trusted(detail::select_dims(psi.dims(), order), cut.kept_marginal(psi.amplitudes()));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const Subsystems sorted = detail::normalize_keep(rho.dims(), keep);
  return DensityMatrix::from_trusted(detail::select_dims(rho.dims(), sorted),
                                     partial_trace_ordered(rho.matrix(), rho.dims(), sorted));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

inline DensityMatrix partial_trace_ordered(const DensityMatrix& rho, const Subsystems& order) {
  return DensityMatrix::from_trusted(detail::select_dims(rho.dims(), order),
                                     partial_trace_ordered(rho.matrix(), rho.dims(), order));
}

// Same operator, subsystems merged or split (e.g. [2,2,2] -> [2,4]).
inline DensityMatrix regroup(const DensityMatrix& rho, Dims dims) {
  if (total_dimension(dims) != rho.dimension()) throw InvalidArgument("regroup: dimension mismatch");
  return DensityMatrix::from_trusted(std::move(dims), rho.matrix());
}

inline PureState regroup(const PureState& psi, Dims dims) {
  return PureState(std::move(dims), std::vector<cplx>(psi.amplitudes().begin(), psi.amplitudes().end()));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<cplx> amps;
  amps.reserve(a.dimension() * b.dimension());
  for (auto x : a.amplitudes())
    for (auto y : b.amplitudes()) amps.push_back(x * y);
  return PureState::normalized(std::move(dims), std::move(amps));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::from_trusted(std::move(dims), kron(a.matrix(), b.matrix()));
}

// sum_k w_k rho_k; weights must be nonnegative and sum to 1.
inline DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states) {
  if (weights.size() != states.size() || states.empty()) throw InvalidArgument("mixture: size mismatch");
  CMatrix acc(states.front().dimension(), states.front().dimension());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (weights[k] < 0.0) throw DomainError("mixture: negative weight");
    if (states[k].dims() != states.front().dims()) throw InvalidArgument("mixture: dims differ");
    acc += states[k].matrix() * cplx(weights[k]);
  }
  return DensityMatrix::from_trusted(states.front().dims(), std::move(acc));
}

// ---------------------------------------------------------------------------
// Catalog

// Computational basis state |digits>.
inline PureState basis_state(Dims dims, const std::vector<std::size_t>& digits) {
  if (digits.size() != dims.size()) throw InvalidArgument("basis_state: digit count differs from dims");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] >= dims[k]) throw InvalidArgument("basis_state: digit out of range");
    idx = idx * dims[k] + digits[k];
  }
  std::vector<cplx> amps(total_dimension(dims));
  amps[idx] = 1.0;
  return PureState(std::move(dims), std::move(amps));
}

inline PureState ghz(std::size_t n) {
  if (n < 2) throw InvalidArgument("ghz: need at least 2 qubits");
  if (n > 12) throw InvalidArgument("ghz: more than 12 qubits exceeds the supported size");
  std::vector<cplx> amps(std::size_t{1} << n);
  amps.front() = amps.back() = 1.0 / std::numbers::sqrt2;
  return PureState(Dims(n, 2), std::move(amps));
}

inline PureState bell_state() { return ghz(2); }

// Equal superposition of the n single-excitation basis states.
inline PureState w_state(std::size_t n) {
  if (n < 2) throw InvalidArgument("w_state: need at least 2 qubits");
  if (n > 12) throw InvalidArgument("w_state: more than 12 qubits exceeds the supported size");
  std::vector<cplx> amps(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) amps[std::size_t{1} << k] = a;
  return PureState(Dims(n, 2), std::move(amps));
}

enum class WForm {
  coffman,  // sin t cos p |001> + sin t sin p |010> + cos t |100>
  printed,  // same with cos p on |100>, renormalized
};

inline PureState generalized_w(double theta, double phi, WForm form = WForm::coffman) {
  const double c001 = std::sin(theta) * std::cos(phi);
  const double c010 = std::sin(theta) * std::sin(phi);
  const double c100 = form == WForm::coffman ? std::cos(theta) : std::cos(phi);
  std::vector<cplx> amps(8);
  amps[0b001] = c001;
  amps[0b010] = c010;
  amps[0b100] = c100;
  return PureState::normalized(Dims{2, 2, 2}, std::move(amps));
}

// 4x2x2 state (a|000> + b|110> + a|201> + b|311>)/sqrt2, a = cos t, b = sin t.
inline PureState ququart_state(double theta) {
  const double a = std::cos(theta), b = std::sin(theta);
  std::vector<cplx> amps(16);
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> cplx& { return amps[x * 4 + y * 2 + z]; };
  at(0, 0, 0) = a;
  at(1, 1, 0) = b;
  at(2, 0, 1) = a;
  at(3, 1, 1) = b;
  return PureState::normalized(Dims{4, 2, 2}, std::move(amps));
}

// Totally antisymmetric three-qutrit state.
inline PureState antisymmetric_qutrit_state() {
  std::vector<cplx> amps(27);
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> cplx& { return amps[x * 9 + y * 3 + z]; };
  at(0, 1, 2) = 1.0;
  at(0, 2, 1) = -1.0;
  at(1, 2, 0) = 1.0;
  at(1, 0, 2) = -1.0;
  at(2, 0, 1) = 1.0;
  at(2, 1, 0) = -1.0;
  return PureState::normalized(Dims{3, 3, 3}, std::move(amps));
}

// 3x2x2 state proportional to sqrt2|010> + sqrt2|101> + |200> + |211>
// (zero-based labels).
inline PureState qutrit_two_qubit_state() {
  std::vector<cplx> amps(12);
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> cplx& { return amps[x * 4 + y * 2 + z]; };
  at(0, 1, 0) = std::numbers::sqrt2;
  at(1, 0, 1) = std::numbers::sqrt2;
  at(2, 0, 0) = 1.0;
  at(2, 1, 1) = 1.0;
  return PureState::normalized(Dims{3, 2, 2}, std::move(amps));
}

inline PureState haar_random_state(Dims dims, Rng& rng) {
  const std::size_t d = total_dimension(dims);
  std::vector<cplx> amps(d);
  for (auto& a : amps) a = complex_gaussian(rng);
  return PureState::normalized(std::move(dims), std::move(amps));
}

}  // namespace tqent
