#pragma once

// Scalar entanglement measures: Tsallis-q entropy, binary entropy and
// entanglement of formation, Wootters concurrence, f_q, and TEE.

#include <cmath>
#include <optional>
#include <string>

#include "tqent/qstate.hpp"

namespace tqent {

// The Tsallis parameter q > 0 with its validity-window classification.
class QParam {
 public:
  static constexpr double kWindowSlack = 1e-12;

  static double critical_low() { return (5.0 - std::sqrt(13.0)) / 2.0; }
  static double critical_high() { return (5.0 + std::sqrt(13.0)) / 2.0; }

  QParam(double q) : q_(q) {  // NOLINT: implicit from double is intended
    if (!std::isfinite(q) || q <= 0.0) throw DomainError("q must be a positive real, got " + std::to_string(q));
  }

  double value() const { return q_; }
  operator double() const { return q_; }  // NOLINT

  bool is_von_neumann() const { return q_ == 1.0; }

  // q in [qc1, qc2]: f_q(C^2) is the two-qubit TEE.
  bool analytic_two_qubit() const {
    return q_ >= critical_low() - kWindowSlack && q_ <= critical_high() + kWindowSlack;
  }

  // q in [qc1, 2] u [3, qc2]: f_q is additionally concave in C^2.
  bool concave_regime() const {
    const bool low = q_ >= critical_low() - kWindowSlack && q_ <= 2.0 + kWindowSlack;
    const bool high = q_ >= 3.0 - kWindowSlack && q_ <= critical_high() + kWindowSlack;
    return low || high;
  }

 private:
  double q_;
};

struct ConcurrenceValue {
  double c = 0.0;
  std::optional<Spectrum> lambdas;  // Wootters lambda_i, descending
};

// A TEE value; lower_bound marks results only guaranteed as lower bounds
// (f_q(C^2) evaluated outside the range where it is exact).
struct TeeValue {
  double value = 0.0;
  bool lower_bound = false;
};

namespace detail {

// expm1(z)/z with its z -> 0 limit.
inline double expm1_ratio(double z) { return std::abs(z) < 1e-300 ? 1.0 : std::expm1(z) / z; }

// (lambda - lambda^q)/(q - 1) written as -lambda ln(lambda) * E((q-1) ln lambda),
// which is exact at q = 1 and free of cancellation near it.
inline double tsallis_term(double lambda, double log_lambda, double q) {
  if (lambda <= 0.0) return 0.0;
  return -lambda * log_lambda * expm1_ratio((q - 1.0) * log_lambda);
}

inline double tsallis_term(double lambda, double q) { return lambda <= 0.0 ? 0.0 : tsallis_term(lambda, std::log(lambda), q); }

inline double clamp_unit(double x, const char* who) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw DomainError(std::string(who) + ": argument " + std::to_string(x) + " outside [0, 1]");
  }
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace detail

// T_q of a probability vector. Negative round-off entries are clamped to zero
// and the vector renormalized.
inline double tsallis_entropy(std::span<const double> spectrum, QParam q) {
  double total = 0.0;
  for (double v : spectrum) total += std::max(v, 0.0);
  if (!(total > 0.0)) throw DomainError("tsallis_entropy: spectrum has no positive weight");
  double t = 0.0;
  for (double v : spectrum) t += detail::tsallis_term(std::max(v, 0.0) / total, q);
  return std::max(t, 0.0);
}

inline double tsallis_entropy(const Spectrum& s, QParam q) { return tsallis_entropy(std::span<const double>(s.values), q); }

inline double tsallis_entropy(const DensityMatrix& rho, QParam q) { return tsallis_entropy(rho.spectrum(), q); }

// H(x) = -x ln x - (1-x) ln(1-x).
inline double binary_entropy(double x) {
  x = detail::clamp_unit(x, "binary_entropy");
  const double p[2] = {x, 1.0 - x};
  return tsallis_entropy(std::span<const double>(p), QParam(1.0));
}

// f_q(x) = [1 - a^q - b^q]/(q-1) with a, b = (1 +- sqrt(1-x))/2; at q = 1 the
// binary entropy H(a).
inline double f_q(double x, QParam q) {
  x = detail::clamp_unit(x, "f_q");
  const double s = std::sqrt(1.0 - x);
  const double a = 0.5 * (1.0 + s);
  const double b = x / (2.0 * (1.0 + s));  // (1 - s)/2 without cancellation
  return detail::tsallis_term(a, std::log1p(-b), q) + detail::tsallis_term(b, q);
}

// ---------------------------------------------------------------------------
// Concurrence

namespace detail {

inline void require_two_qubit(const Dims& dims, const char* who) {
  if (dims != Dims{2, 2}) throw InvalidArgument(std::string(who) + ": expected dims [2,2], got " + dims_string(dims));
}

inline const CMatrix& sigma_yy() {
  static const CMatrix m = {{0, 0, 0, -1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}};
  return m;
}

inline ConcurrenceValue concurrence_from_lambdas(std::vector<double> lambdas) {
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  double c = lambdas.empty() ? 0.0 : lambdas.front();
  for (std::size_t i = 1; i < lambdas.size(); ++i) c -= lambdas[i];
  return ConcurrenceValue{std::clamp(c, 0.0, 1.0), Spectrum{std::move(lambdas)}};
}

}  // namespace detail

// Wootters: lambda_i are square roots of the eigenvalues of the Hermitian
// matrix sqrt(rho) rho~ sqrt(rho), rho~ = (sy x sy) rho* (sy x sy).
inline ConcurrenceValue concurrence_two_qubit(const DensityMatrix& rho) {
  detail::require_two_qubit(rho.dims(), "concurrence_two_qubit");
  const CMatrix root = psd_sqrt(rho.matrix());
  const CMatrix& yy = detail::sigma_yy();
  const CMatrix flipped = yy * rho.matrix().conjugate() * yy;
  CMatrix r = root * flipped * root;
  const Spectrum ev = hermitian_eigenvalues(r);
  std::vector<double> lambdas(4);
  for (std::size_t i = 0; i < 4; ++i) lambdas[i] = std::sqrt(std::max(ev.values[i], 0.0));
  return detail::concurrence_from_lambdas(std::move(lambdas));
}

// Wootters concurrence of the pair `pair` of a pure multipartite state where
// both members of the pair are qubits. With Psi the 4 x K coefficient matrix
// (pair x rest), the lambda_i are the singular values of Psi^T (sy x sy) Psi.
inline ConcurrenceValue pair_concurrence(const Bipartition& pair_cut, std::span<const cplx> amps) {
  if (pair_cut.kept_dim() != 4) throw InvalidArgument("pair_concurrence: the pair must be two qubits");
  const CMatrix psi = pair_cut.coefficients(amps);
  const std::size_t k = psi.cols();
  // Sigma Psi: rows (0,1,2,3) -> (-row3, row2, row1, -row0)
  CMatrix tau(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      const cplx v = -psi(0, i) * psi(3, j) + psi(1, i) * psi(2, j) + psi(2, i) * psi(1, j) - psi(3, i) * psi(0, j);
      tau(i, j) = v;
      tau(j, i) = v;
    }
  const Spectrum ev = hermitian_eigenvalues(tau.adjoint() * tau);
  std::vector<double> lambdas;
  for (std::size_t i = 0; i < std::min<std::size_t>(k, 4); ++i) lambdas.push_back(std::sqrt(std::max(ev.values[i], 0.0)));
  lambdas.resize(4, 0.0);
  return detail::concurrence_from_lambdas(std::move(lambdas));
}

inline ConcurrenceValue pair_concurrence(const PureState& psi, std::size_t i, std::size_t j) {
  if (i == j) throw InvalidArgument("pair_concurrence: the two subsystems must differ");
  const Bipartition cut(psi.dims(), Subsystems{std::min(i, j), std::max(i, j)});
  return pair_concurrence(cut, psi.amplitudes());
}

// sqrt(2(1 - Tr rho_A^2)) of a pure bipartite cut, clamped to its range.
inline double concurrence_from_marginal(const CMatrix& marginal) {
  double purity = 0.0;
  for (const auto& e : marginal.entries()) purity += std::norm(e);
  const double d = static_cast<double>(marginal.rows());
  const double cmax = std::sqrt(2.0 * (d - 1.0) / d);
  return std::clamp(std::sqrt(std::max(2.0 * (1.0 - purity), 0.0)), 0.0, cmax);
}

inline ConcurrenceValue concurrence_pure(const PureState& psi, std::span<const std::size_t> party_a) {
  const Bipartition cut(psi.dims(), detail::normalize_keep(psi.dims(), party_a));
  if (cut.traced_dim() == 1) throw InvalidArgument("concurrence_pure: party must be a proper subset");
  return ConcurrenceValue{concurrence_from_marginal(cut.smaller_marginal(psi.amplitudes())), std::nullopt};
}

inline ConcurrenceValue concurrence_pure(const PureState& psi, std::initializer_list<std::size_t> party_a) {
  return concurrence_pure(psi, std::span<const std::size_t>(party_a.begin(), party_a.size()));
}

// E_f = H((1 + sqrt(1 - C^2))/2), natural log.
inline double ef_two_qubit(const DensityMatrix& rho) {
  const double c = concurrence_two_qubit(rho).c;
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

// ---------------------------------------------------------------------------
// TEE

inline double tee_from_marginal(const CMatrix& marginal, QParam q) { return tsallis_entropy(hermitian_eigenvalues(marginal), q); }

inline double tee_pure(const PureState& psi, std::span<const std::size_t> party_a, QParam q) {
  const Bipartition cut(psi.dims(), detail::normalize_keep(psi.dims(), party_a));
  if (cut.traced_dim() == 1) throw InvalidArgument("tee_pure: party must be a proper subset");
  return tee_from_marginal(cut.smaller_marginal(psi.amplitudes()), q);
}

inline double tee_pure(const PureState& psi, std::initializer_list<std::size_t> party_a, QParam q) {
  return tee_pure(psi, std::span<const std::size_t>(party_a.begin(), party_a.size()), q);
}

// Two-qubit TEE f_q(C^2). Outside [qc1, qc2] this is only a lower bound:
// refused unless `force`, in which case the result is flagged.
inline TeeValue tee_two_qubit(const DensityMatrix& rho, QParam q, bool force = false) {
  detail::require_two_qubit(rho.dims(), "tee_two_qubit");
  const bool exact = q.analytic_two_qubit();
  if (!exact && !force) {
    throw DomainError("tee_two_qubit: q = " + std::to_string(q.value()) +
                      " is outside the analytic window [(5-sqrt13)/2, (5+sqrt13)/2]; use force for a lower bound");
  }
  const double c = concurrence_two_qubit(rho).c;
  return TeeValue{f_q(c * c, q), !exact};
}

// f_q(C^2) for a 2 x d state from a supplied concurrence. Flagged as a lower
// bound outside [qc1,2] u [3,qc2]. For mixed states of rank > 1 with d > 2 the
// convex roof of TEE can exceed f_q(C^2) even inside that range.
inline TeeValue tee_2xd(const DensityMatrix& rho, QParam q, double concurrence) {
  if (rho.num_subsystems() != 2 || rho.dims()[0] != 2) {
    throw InvalidArgument("tee_2xd: expected dims [2,d], got " + detail::dims_string(rho.dims()));
  }
  if (concurrence < 0.0) throw DomainError("tee_2xd: concurrence must be nonnegative");
  const double c = std::min(concurrence, 1.0);
  return TeeValue{f_q(c * c, q), !q.concave_regime()};
}

inline TeeValue tee_2xd(const DensityMatrix& rho, QParam q, const ConcurrenceValue& c) { return tee_2xd(rho, q, c.c); }

}  // namespace tqent
