#pragma once

// Curvature of f_q and f_q^2, the critical q window, sign scans over (x, q)
// grids, finite-difference cross-checks, bracketing root finding, and the
// power inequalities behind the alpha-power monogamy relation.
//
// Notation: s = sqrt(1 - x), A = 1 + s, B = 1 - s (= x / A), and
// D = (A^{q-1} - B^{q-1})/(q - 1).

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>

#include "tqent/format.hpp"
#include "tqent/measures.hpp"

namespace tqent {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (A^{q-1} - B^{q-1})/(q-1) = B^{q-1} r E((q-1) r), r = ln(A/B); exact at q = 1.
inline double power_gap(double a, double b, double q) {
  if (b <= 0.0) return q > 1.0 ? std::pow(a, q - 1.0) / (q - 1.0) : kInf;
  const double r = std::log1p((a - b) / b);
  return std::pow(b, q - 1.0) * r * expm1_ratio((q - 1.0) * r);
}

struct CurvatureTerms {
  double s, a, b, gap, inv_pow_sum;  // inv_pow_sum = A^{q-2} + B^{q-2}
};

inline CurvatureTerms curvature_terms(double x, double q) {
  const double s = std::sqrt(1.0 - x);
  const double a = 1.0 + s;
  const double b = x / a;
  const double bpow = b > 0.0 ? std::pow(b, q - 2.0) : (q > 2.0 ? 0.0 : (q == 2.0 ? 1.0 : kInf));
  return {s, a, b, power_gap(a, b, q), std::pow(a, q - 2.0) + bpow};
}

inline void require_below_one(double x, const char* who) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError(std::string(who) + ": x = " + std::to_string(x) + " must lie in [0, 1)");
}

}  // namespace detail

// d^2 f_q(C^2)/dC^2 = q/2^q [D/s^3 - C^2 (A^{q-2} + B^{q-2})/s^2], s = sqrt(1 - C^2).
inline double d2_fq_wrt_C(QParam q, double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("d2_fq_wrt_C: C = " + std::to_string(c) + " must lie in (0, 1)");
  const auto t = detail::curvature_terms(c * c, q);
  return q / std::exp2(q) * (t.gap / (t.s * t.s * t.s) - c * c * t.inv_pow_sum / (t.s * t.s));
}

// C -> 1 limit of d2_fq_wrt_C: -(2/3) q (q^2 - 5q + 3)/2^q, i.e. the prefactor
// q/(2^q (q-1)) times one third of -2(q-1)(q^2 - 5q + 3).
inline double d2_fq_wrt_C_at_unit(QParam q) {
  const double qq = q;
  return -(2.0 / 3.0) * qq * (qq * qq - 5.0 * qq + 3.0) / std::exp2(qq);
}

// The cubic -2(q-1)(q^2 - 5q + 3) whose roots delimit the analytic window.
inline double critical_cubic(double q) { return -2.0 * (q - 1.0) * (q * q - 5.0 * q + 3.0); }

// d^2 f_q(x)/dx^2 = q/2^{q+2} [D/s^3 - (A^{q-2} + B^{q-2})/s^2].
// At x = 0 the value is the one-sided limit: -inf for q < 2.
inline double g_q(double x, QParam q) {
  detail::require_below_one(x, "g_q");
  const double qq = q;
  if (x == 0.0 && qq < 2.0) return -detail::kInf;
  const auto t = detail::curvature_terms(x, qq);
  return qq / std::exp2(qq + 2.0) * (t.gap / (t.s * t.s * t.s) - t.inv_pow_sum / (t.s * t.s));
}

// d^2 f_q^2(x)/dx^2 = 2 f'^2 + 2 f f''. At x = 0 the one-sided limit is +inf
// for q <= 1 and q^2/(8(q-1)^2) for 1 < q < 2.
inline double l_q(double x, QParam q) {
  detail::require_below_one(x, "l_q");
  const double qq = q;
  if (x == 0.0 && qq < 2.0) return qq <= 1.0 ? detail::kInf : qq * qq / (8.0 * (qq - 1.0) * (qq - 1.0));
  const auto t = detail::curvature_terms(x, qq);
  const double s2 = t.s * t.s;
  const double f = f_q(x, q);
  return qq * qq * t.gap * t.gap / (std::exp2(2.0 * qq + 1.0) * s2) +
         f * (-qq * t.inv_pow_sum / (8.0 * s2 * std::exp2(qq - 2.0)) + qq * t.gap / (4.0 * s2 * t.s * std::exp2(qq - 1.0)));
}

// ---------------------------------------------------------------------------
// Root finding

struct RootResult {
  double root;
  double value;  // f(root)
  std::size_t iterations;
};

// Brent's method on a sign-changing bracket. `trace` (optional) receives the
// bracket after every iteration; brackets are nested.
inline RootResult brent_root(const std::function<double(double)>& f, double lo, double hi,
                             const std::function<void(double, double)>& trace = {}) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr std::size_t kMaxIterations = 200;
  double a = lo, b = hi, fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) {
    throw DomainError("find_root_q: no sign change on [" + format_number(lo) + ", " + format_number(hi) +
                      "] (f = " + format_number(fa) + ", " + format_number(fb) + ")");
  }
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  double c = a, fc = fa, d = b - a, e = d;
  for (std::size_t it = 1; it <= kMaxIterations; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 4.0 * kEps * std::abs(b) + 5e-14;
    const double m = 0.5 * (c - b);
    if (trace) trace(std::min(b, c), std::max(b, c));
    if (std::abs(m) <= tol || fb == 0.0) return {b, fb, it};
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, qv;
      const double s = fb / fa;
      if (a == c) {  // secant
        p = 2.0 * m * s;
        qv = 1.0 - s;
      } else {  // inverse quadratic interpolation
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        qv = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) qv = -qv;
      else p = -p;
      if (2.0 * p < std::min(3.0 * m * qv - std::abs(tol * qv), std::abs(e * qv))) {
        e = d;
        d = p / qv;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("find_root_q: no convergence within 200 iterations");
}

inline double find_root_q(const std::function<double(double)>& f, double lo, double hi) {
  return brent_root(f, lo, hi).root;
}

// Roots of the C -> 1 curvature limit, i.e. (5 -+ sqrt13)/2, found by bracketing
// and checked against the quadratic formula.
inline std::pair<double, double> critical_q() {
  auto limit = [](double q) { return d2_fq_wrt_C_at_unit(q); };
  const double lo = find_root_q(limit, 0.5, 0.9);
  const double hi = find_root_q(limit, 4.0, 4.6);
  if (std::abs(lo - QParam::critical_low()) > 1e-10 || std::abs(hi - QParam::critical_high()) > 1e-10) {
    throw ConvergenceError("critical_q: roots disagree with (5 -+ sqrt13)/2 beyond 1e-10");
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Finite differences

// Central second difference with one Richardson step: (4 D(h/2) - D(h))/3.
inline double second_derivative_fd(const std::function<double(double)>& f, double x, double h = 1e-3) {
  auto central = [&](double step) { return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

// ---------------------------------------------------------------------------
// Sign scans

enum class DerivativeKind { d2_f_wrt_C, l_q, g_q };

inline std::string to_string(DerivativeKind k) {
  switch (k) {
    case DerivativeKind::d2_f_wrt_C: return "d2fc";
    case DerivativeKind::l_q: return "lq";
    case DerivativeKind::g_q: return "gq";
  }
  return "?";
}

inline double evaluate(DerivativeKind kind, double x, QParam q) {
  switch (kind) {
    case DerivativeKind::d2_f_wrt_C: return d2_fq_wrt_C(q, x);
    case DerivativeKind::l_q: return l_q(x, q);
    case DerivativeKind::g_q: return g_q(x, q);
  }
  return 0.0;
}

enum class ClaimedSign { nonnegative, nonpositive, positive };

struct DerivativeSample {
  double x;
  double q;
  double value;
  DerivativeKind kind;
};

struct SignScanReport {
  std::string label;
  DerivativeKind kind;
  ClaimedSign claim;
  double tolerance;
  std::size_t nx, nq;
  std::vector<DerivativeSample> samples;     // row-major: q outer, x inner
  std::vector<DerivativeSample> violations;  // samples where the claim fails
  double min_value, max_value;
  double min_abs_value;  // closest approach to zero

  bool passed() const { return violations.empty(); }

  void write_csv(std::ostream& out) const {
    out << "x,q," << to_string(kind) << '\n';
    for (const auto& s : samples) out << format_number(s.x) << ',' << format_number(s.q) << ',' << format_number(s.value) << '\n';
  }
};

// n evenly spaced points on [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidArgument("linspace: need at least 2 points");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

// n points strictly inside (lo, hi).
inline std::vector<double> interior_points(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n + 1);
  return v;
}

inline bool claim_holds(ClaimedSign claim, double v, double tol) {
  switch (claim) {
    case ClaimedSign::nonnegative: return v >= -tol;
    case ClaimedSign::nonpositive: return v <= tol;
    case ClaimedSign::positive: return v > -tol;
  }
  return false;
}

inline SignScanReport scan_sign(DerivativeKind kind, std::span<const double> xs, std::span<const double> qs,
                                ClaimedSign claim, std::string label = {}, double tolerance = 1e-10) {
  if (xs.size() < 2 || qs.size() < 2) throw InvalidArgument("scan_sign: grid must be at least 2 x 2");
  for (double x : xs) {
    if (x < 0.0 || x > 1.0 - 1e-6) throw InvalidArgument("scan_sign: x grid must lie within [0, 1 - 1e-6]");
  }
  SignScanReport r{std::move(label), kind, claim, tolerance, xs.size(), qs.size(), {}, {},
                   detail::kInf, -detail::kInf, detail::kInf};
  r.samples.reserve(xs.size() * qs.size());
  for (double q : qs) {
    const QParam qp(q);
    for (double x : xs) {
      const DerivativeSample s{x, q, evaluate(kind, x, qp), kind};
      r.samples.push_back(s);
      r.min_value = std::min(r.min_value, s.value);
      r.max_value = std::max(r.max_value, s.value);
      r.min_abs_value = std::min(r.min_abs_value, std::abs(s.value));
      if (!claim_holds(claim, s.value, tolerance)) r.violations.push_back(s);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Power inequalities

// (1 + x)^t >= 1 + x^t for x in [0, 1], t >= 1.
inline bool power_sum_inequality(double x, double t) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("power_sum_inequality: x must lie in [0, 1]");
  if (!(t >= 1.0)) throw DomainError("power_sum_inequality: t must be >= 1");
  const double lhs = std::pow(1.0 + x, t);
  const double rhs = 1.0 + std::pow(x, t);
  return lhs >= rhs * (1.0 - 1e-14);
}

// (sum x_i^2)^{alpha/2} >= sum x_i^alpha for x_i in [0, 1], alpha >= 2.
inline bool power_mean_inequality(std::span<const double> xs, double alpha) {
  if (!(alpha >= 2.0)) throw DomainError("power_mean_inequality: alpha must be >= 2");
  double sq = 0.0, pw = 0.0;
  for (double x : xs) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("power_mean_inequality: entries must lie in [0, 1]");
    sq += x * x;
    pw += std::pow(x, alpha);
  }
  return std::pow(sq, alpha / 2.0) >= pw * (1.0 - 1e-14);
}

}  // namespace tqent
