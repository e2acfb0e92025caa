#pragma once

// Monogamy inequalities for concurrence and squared TEE, hierarchical and
// alpha-power variants, the residual-tangle indicator, and closed-form
// residuals of the paper's example states.

#include <cmath>
#include <optional>
#include <string>

#include "tqent/roof.hpp"

namespace tqent {

inline constexpr double kMonogamyTolerance = 1e-8;

struct MonogamyReport {
  std::optional<QParam> q;          // absent for the concurrence (CKW) check
  double lhs = 0.0;                 // focus | rest term
  std::vector<double> terms;        // per-partner terms, in `partners` order
  std::vector<Subsystems> partners;  // subsystems forming each partner block
  double residual = 0.0;            // lhs - sum(terms)
  bool satisfied = true;            // residual >= -tolerance
  double tolerance = kMonogamyTolerance;
  bool estimated = false;           // some term comes from the numerical roof
};

namespace detail {

inline MonogamyReport finish_report(MonogamyReport r) {
  double sum = 0.0;
  for (double t : r.terms) sum += t;
  r.residual = r.lhs - sum;
  r.satisfied = r.residual >= -r.tolerance;
  return r;
}

inline void require_qubits(const PureState& psi, const char* who) {
  if (!psi.is_qubits()) throw InvalidArgument(std::string(who) + ": every subsystem must be a qubit, got dims " + dims_string(psi.dims()));
}

inline void require_focus(const PureState& psi, std::size_t focus, const char* who) {
  if (focus >= psi.num_subsystems()) {
    throw InvalidArgument(std::string(who) + ": focus " + std::to_string(focus) + " out of range for " +
                          std::to_string(psi.num_subsystems()) + " subsystems");
  }
}

inline void require_window(QParam q, const char* who) {
  if (!q.analytic_two_qubit()) {
    throw DomainError(std::string(who) + ": q = " + std::to_string(q.value()) +
                      " is outside [(5-sqrt13)/2, (5+sqrt13)/2]");
  }
}

inline void require_concave_regime(QParam q, const char* who) {
  if (!q.concave_regime()) {
    throw DomainError(std::string(who) + ": q = " + std::to_string(q.value()) +
                      " is outside [(5-sqrt13)/2, 2] u [3, (5+sqrt13)/2]");
  }
}

inline Subsystems others(std::size_t n, std::size_t focus) {
  Subsystems out;
  for (std::size_t j = 0; j < n; ++j)
    if (j != focus) out.push_back(j);
  return out;
}

// Unsquared TEE of focus|rest and of each focus-partner pair (f_q(C^2)) of a
// pure multiqubit state.
struct QubitTeeTerms {
  double cut;
  std::vector<double> pairs;
  Subsystems partners;
};

inline QubitTeeTerms qubit_tee_terms(const PureState& psi, std::size_t focus, QParam q) {
  QubitTeeTerms t{tee_pure(psi, {focus}, q), {}, others(psi.num_subsystems(), focus)};
  for (auto j : t.partners) {
    const double c = pair_concurrence(psi, focus, j).c;
    t.pairs.push_back(f_q(c * c, q));
  }
  return t;
}

}  // namespace detail

// C^2(focus|rest) >= sum_j C^2(focus, j).
inline MonogamyReport ckw_check(const PureState& psi, std::size_t focus, double tolerance = kMonogamyTolerance) {
  detail::require_qubits(psi, "ckw_check");
  detail::require_focus(psi, focus, "ckw_check");
  if (psi.num_subsystems() < 3) throw InvalidArgument("ckw_check: need at least 3 qubits");
  MonogamyReport r;
  r.tolerance = tolerance;
  const double c = concurrence_pure(psi, {focus}).c;
  r.lhs = c * c;
  for (auto j : detail::others(psi.num_subsystems(), focus)) {
    const double cj = pair_concurrence(psi, focus, j).c;
    r.terms.push_back(cj * cj);
    r.partners.push_back({j});
  }
  return detail::finish_report(std::move(r));
}

// T_q^alpha(focus|rest) >= sum_j T_q^alpha(focus, j); alpha = 2 is the squared
// TEE residual tangle.
inline MonogamyReport alpha_residual(const PureState& psi, std::size_t focus, QParam q, double alpha,
                                     double tolerance = kMonogamyTolerance) {
  detail::require_qubits(psi, "alpha_residual");
  detail::require_focus(psi, focus, "alpha_residual");
  if (psi.num_subsystems() < 3) throw InvalidArgument("alpha_residual: need at least 3 qubits");
  if (!(alpha >= 2.0)) throw DomainError("alpha_residual: alpha must be >= 2, got " + std::to_string(alpha));
  detail::require_window(q, "alpha_residual");
  const detail::QubitTeeTerms t = detail::qubit_tee_terms(psi, focus, q);
  MonogamyReport r;
  r.q = q;
  r.tolerance = tolerance;
  auto power = [alpha](double x) { return alpha == 2.0 ? x * x : std::pow(x, alpha); };
  r.lhs = power(t.cut);
  for (std::size_t k = 0; k < t.pairs.size(); ++k) {
    r.terms.push_back(power(t.pairs[k]));
    r.partners.push_back({t.partners[k]});
  }
  return detail::finish_report(std::move(r));
}

inline MonogamyReport tee_sq_residual(const PureState& psi, std::size_t focus, QParam q,
                                      double tolerance = kMonogamyTolerance) {
  return alpha_residual(psi, focus, q, 2.0, tolerance);
}

// T_q^2(A1|rest) >= sum_{i<k} T_q^2(A1 A_i) + T_q^2(A1|A_k...A_N), where A_i
// enumerates the non-focus qubits in order and the tail block is one party.
// The tail term is f_q(C^2) with C exact for a pure tail reduction, Wootters
// for a single tail qubit, and the roof concurrence otherwise.
inline MonogamyReport hierarchical_check(const PureState& psi, std::size_t focus, std::size_t k, QParam q,
                                         const RoofConfig& cfg = {}, double tolerance = kMonogamyTolerance) {
  detail::require_qubits(psi, "hierarchical_check");
  detail::require_focus(psi, focus, "hierarchical_check");
  const std::size_t n = psi.num_subsystems();
  if (k < 3 || k > n) {
    throw InvalidArgument("hierarchical_check: k = " + std::to_string(k) + " must lie in [3, " + std::to_string(n) + "]");
  }
  detail::require_concave_regime(q, "hierarchical_check");
  const Subsystems rest = detail::others(n, focus);
  MonogamyReport r;
  r.q = q;
  r.tolerance = tolerance;
  const double cut = tee_pure(psi, {focus}, q);
  r.lhs = cut * cut;
  for (std::size_t i = 0; i + 2 < k; ++i) {
    const double c = pair_concurrence(psi, focus, rest[i]).c;
    const double t = f_q(c * c, q);
    r.terms.push_back(t * t);
    r.partners.push_back({rest[i]});
  }
  const Subsystems tail(rest.begin() + static_cast<std::ptrdiff_t>(k - 2), rest.end());
  Subsystems order{focus};
  order.insert(order.end(), tail.begin(), tail.end());
  const DensityMatrix block = reduced_state_ordered(psi, order);
  const DensityMatrix rho = regroup(block, Dims{2, block.dimension() / 2});
  double c_tail = 0.0;
  if (tail.size() == 1) {
    c_tail = concurrence_two_qubit(rho).c;
  } else {
    const RoofResult roof = roof_concurrence(rho, cfg);  // exact when rho is pure
    c_tail = roof.value;
    r.estimated = roof.decomposition.size() > 1;
  }
  const double t_tail = tee_2xd(rho, q, c_tail).value;
  r.terms.push_back(t_tail * t_tail);
  r.partners.push_back(tail);
  return detail::finish_report(std::move(r));
}

// ---------------------------------------------------------------------------
// Indicator tau_q

struct IndicatorValue {
  double value = 0.0;
  bool upper_bound = false;  // roof minimization over a mixed state
  std::size_t restarts = 0;
};

inline IndicatorValue indicator(const PureState& psi, QParam q, std::size_t focus = 0) {
  if (psi.num_subsystems() < 3) throw InvalidArgument("indicator: need at least 3 qubits");
  return IndicatorValue{tee_sq_residual(psi, focus, q).residual, false, 0};
}

// Convex roof of the pure-state residual tangle; an upper bound for mixed input.
inline IndicatorValue indicator(const DensityMatrix& rho, QParam q, const RoofConfig& cfg = {}, std::size_t focus = 0) {
  if (!rho.is_qubits()) throw InvalidArgument("indicator: every subsystem must be a qubit");
  if (rho.num_subsystems() < 3) throw InvalidArgument("indicator: need at least 3 qubits");
  if (focus >= rho.num_subsystems()) throw InvalidArgument("indicator: focus out of range");
  detail::require_window(q, "indicator");
  const RoofResult res = minimize_roof(rho, tee_sq_residual_cost(rho.dims(), focus, q), cfg);
  const bool pure = res.decomposition.size() == 1 && rho.rank() == 1;
  return IndicatorValue{res.value, !pure, pure ? 0 : cfg.restarts};
}

// tau_q(W_N) = f_q^2(4(N-1)/N^2) - (N-1) f_q^2(4/N^2).
inline double w_indicator_closed_form(std::size_t n, QParam q) {
  if (n < 3) throw InvalidArgument("w_indicator_closed_form: need n >= 3");
  const double nn = static_cast<double>(n);
  const double cut = f_q(4.0 * (nn - 1.0) / (nn * nn), q);
  const double pair = f_q(4.0 / (nn * nn), q);
  return cut * cut - (nn - 1.0) * pair * pair;
}

// ---------------------------------------------------------------------------
// Closed-form residuals of the example states (undefined at q = 1)

namespace detail {
inline void require_not_one(QParam q, const char* who) {
  if (q.is_von_neumann()) throw DomainError(std::string(who) + ": the closed form is singular at q = 1");
}
}  // namespace detail

// 4x2x2 state (ququart_state): (1-a)(1-b)[(1+a)(1+b)-2]/(q-1)^2 with
// a = 2^{1-q}, b = cos^{2q} t + sin^{2q} t.
inline double ququart_residual(double theta, QParam q) {
  detail::require_not_one(q, "ququart_residual");
  const double a = std::pow(0.5, q - 1.0);
  const double b = std::pow(std::abs(std::cos(theta)), 2.0 * q) + std::pow(std::abs(std::sin(theta)), 2.0 * q);
  const double qm1 = q - 1.0;
  return (1.0 - a) * (1.0 - b) * ((1.0 + a) * (1.0 + b) - 2.0) / (qm1 * qm1);
}

// Antisymmetric three-qutrit state: [(1-3^{1-q})^2 - 2(1-2^{1-q})^2]/(q-1)^2.
inline double antisymmetric_residual(QParam q) {
  detail::require_not_one(q, "antisymmetric_residual");
  const double cut = 1.0 - std::pow(1.0 / 3.0, q - 1.0);
  const double pair = 1.0 - std::pow(0.5, q - 1.0);
  const double qm1 = q - 1.0;
  return (cut * cut - 2.0 * pair * pair) / (qm1 * qm1);
}

// Qutrit/two-qubit state, from the spectra: cut {1/3,1/3,1/3}, each pair
// reduction's eigenstates {1/3, 2/3}.
inline double qutrit_two_qubit_residual(QParam q) {
  detail::require_not_one(q, "qutrit_two_qubit_residual");
  const double qm1 = q - 1.0;
  const double cut = (1.0 - std::pow(3.0, 1.0 - q)) / qm1;
  const double pair = (1.0 - (1.0 + std::pow(2.0, q)) * std::pow(3.0, -q)) / qm1;
  return cut * cut - 2.0 * pair * pair;
}

// Squared-TEE residual of focus|rest against every focus-partner pair for a
// pure state of arbitrary local dimensions. Pair terms use the exact value for
// pure reductions, f_q(C^2) for two-qubit pairs inside the analytic window, and
// the numerical roof otherwise (report flagged estimated).
inline MonogamyReport tee_sq_residual_general(const PureState& psi, std::size_t focus, QParam q,
                                              const RoofConfig& cfg = {}, double tolerance = kMonogamyTolerance) {
  detail::require_focus(psi, focus, "tee_sq_residual_general");
  if (psi.num_subsystems() < 3) throw InvalidArgument("tee_sq_residual_general: need at least 3 subsystems");
  MonogamyReport r;
  r.q = q;
  r.tolerance = tolerance;
  const double cut = tee_pure(psi, {focus}, q);
  r.lhs = cut * cut;
  for (auto j : detail::others(psi.num_subsystems(), focus)) {
    const DensityMatrix pair = reduced_state_ordered(psi, Subsystems{focus, j});
    double t = 0.0;
    if (pair.dims() == Dims{2, 2} && q.analytic_two_qubit()) {
      t = tee_two_qubit(pair, q).value;
    } else {
      const RoofResult roof = roof_tee(pair, Subsystems{0}, q, cfg);  // exact for a pure pair
      t = roof.value;
      r.estimated = r.estimated || roof.decomposition.size() > 1;
    }
    r.terms.push_back(t * t);
    r.partners.push_back({j});
  }
  return detail::finish_report(std::move(r));
}

}  // namespace tqent
