#pragma once

// Verification suites bundled by the `verify` verb. Each check carries a
// pass/fail verdict and a human-readable detail line; informational checks
// report findings without a verdict.

#include <string>

#include "tqent/scan.hpp"

namespace tqent {

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
  bool informational = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"appendix-a", "appendix-b", "appendix-c", "appendix-d", "theorem3-sweep", "examples"};
  return names;
}

namespace detail {

inline std::string num(double v) { return format_number(v, 12); }

inline Check check(std::string name, bool ok, std::string detail) { return Check{std::move(name), ok, std::move(detail), false}; }

inline double max_abs_over(std::span<const double> xs, const std::function<double(double)>& f) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(f(x)));
  return m;
}

inline Check sign_check(const std::string& name, const SignScanReport& r) {
  std::string d = std::to_string(r.nx) + "x" + std::to_string(r.nq) + " grid, range [" + num(r.min_value) + ", " +
                  num(r.max_value) + "], " + std::to_string(r.violations.size()) + " violations";
  if (!r.violations.empty()) {
    const auto& v = r.violations.front();
    d += " (first at x=" + num(v.x) + ", q=" + num(v.q) + ": " + num(v.value) + ")";
  }
  return check(name, r.passed(), d);
}

}  // namespace detail

inline SuiteResult verify_appendix_a() {
  SuiteResult s{"appendix-a", {}};
  const auto [lo, hi] = critical_q();
  s.checks.push_back(detail::check("critical-q-low", std::abs(lo - 0.6972244) <= 1e-6, "q_c1 = " + detail::num(lo)));
  s.checks.push_back(detail::check("critical-q-high", std::abs(hi - 4.3027756) <= 1e-6, "q_c2 = " + detail::num(hi)));
  const double res = std::max(std::abs(lo * lo - 5 * lo + 3), std::abs(hi * hi - 5 * hi + 3));
  s.checks.push_back(detail::check("quadratic-residual", res <= 1e-10, "max |q^2 - 5q + 3| = " + detail::num(res)));
  const bool flips = d2_fq_wrt_C_at_unit(lo - 0.01) < 0 && d2_fq_wrt_C_at_unit(lo + 0.01) > 0 &&
                     d2_fq_wrt_C_at_unit(hi - 0.01) > 0 && d2_fq_wrt_C_at_unit(hi + 0.01) < 0;
  s.checks.push_back(detail::check("curvature-sign-change", flips, "C->1 curvature changes sign across both roots"));
  // the closed-form limit agrees with the second derivative evaluated close to C = 1
  double lim_err = 0.0;
  for (double q : {0.8, 1.5, 2.5, 3.5, 4.2})
    lim_err = std::max(lim_err, std::abs(d2_fq_wrt_C(q, 1.0 - 1e-7) - d2_fq_wrt_C_at_unit(q)));
  s.checks.push_back(detail::check("limit-consistency", lim_err <= 1e-5, "max |d2(C=1-1e-7) - limit| = " + detail::num(lim_err)));
  const auto cs = linspace(0.01, 0.99, 99);
  const double e2 = detail::max_abs_over(cs, [](double c) { return d2_fq_wrt_C(2.0, c) - 1.0; });
  const double e4 = detail::max_abs_over(cs, [](double c) { return d2_fq_wrt_C(4.0, c) - (16.0 - 12.0 * c * c) / 24.0; });
  s.checks.push_back(detail::check("integer-q-curvature", std::max(e2, e4) <= 1e-10,
                                   "q=2 vs 1: " + detail::num(e2) + ", q=4 vs (16-12C^2)/24: " + detail::num(e4)));
  return s;
}

inline SuiteResult verify_appendix_b() {
  SuiteResult s{"appendix-b", {}};
  const auto xs = linspace(0.0, 0.999, 200);
  const auto qs = linspace(QParam::critical_low(), QParam::critical_high(), 200);
  s.checks.push_back(detail::sign_check("lq-positive", scan_sign(DerivativeKind::l_q, xs, qs, ClaimedSign::positive, "D")));
  const auto grid = linspace(0.0, 0.999, 1000);
  const double e2 = detail::max_abs_over(grid, [](double x) { return l_q(x, 2.0) - 0.5; });
  const double e3 = detail::max_abs_over(grid, [](double x) { return l_q(x, 3.0) - 9.0 / 32.0; });
  s.checks.push_back(detail::check("l2-l3-constant", std::max(e2, e3) <= 1e-10, "|l2 - 1/2| = " + detail::num(e2) + ", |l3 - 9/32| = " + detail::num(e3)));
  const double l40 = l_q(0.0, 4.0);
  s.checks.push_back(detail::check("l4-at-zero", std::abs(l40 - 2.0 / 9.0) <= 1e-12, "l4(0) = " + detail::num(l40) + " (exact 2/9)"));
  return s;
}

inline SuiteResult verify_appendix_c() {
  SuiteResult s{"appendix-c", {}};
  const double qc1 = QParam::critical_low(), qc2 = QParam::critical_high();
  const auto xs = linspace(0.0, 0.999, 200);
  s.checks.push_back(detail::sign_check("gq-nonpositive-D1", scan_sign(DerivativeKind::g_q, xs, linspace(qc1, 2.0, 200), ClaimedSign::nonpositive, "D1")));
  s.checks.push_back(detail::sign_check("gq-nonpositive-D3", scan_sign(DerivativeKind::g_q, xs, linspace(3.0, qc2, 200), ClaimedSign::nonpositive, "D3")));
  s.checks.push_back(detail::sign_check("gq-nonnegative-D2", scan_sign(DerivativeKind::g_q, xs, interior_points(2.0, 3.0, 200), ClaimedSign::nonnegative, "D2")));
  const auto grid = linspace(0.0, 0.999, 1000);
  const double g2 = detail::max_abs_over(grid, [](double x) { return g_q(x, 2.0); });
  const double g3 = detail::max_abs_over(grid, [](double x) { return g_q(x, 3.0); });
  const double g4 = detail::max_abs_over(grid, [](double x) { return g_q(x, 4.0) + 1.0 / 12.0; });
  s.checks.push_back(detail::check("g2-g3-vanish", std::max(g2, g3) <= 1e-12, "max |g2| = " + detail::num(g2) + ", max |g3| = " + detail::num(g3)));
  s.checks.push_back(detail::check("g4-constant", g4 <= 1e-12, "max |g4 + 1/12| = " + detail::num(g4)));
  const auto unit = linspace(0.0, 1.0, 1000);
  const double f2 = detail::max_abs_over(unit, [](double x) { return f_q(x, 2.0) - x / 2.0; });
  const double f3 = detail::max_abs_over(unit, [](double x) { return f_q(x, 3.0) - 3.0 * x / 8.0; });
  const double f4 = detail::max_abs_over(unit, [](double x) { return f_q(x, 4.0) - (8.0 * x - x * x) / 24.0; });
  s.checks.push_back(detail::check("integer-q-closed-forms", std::max({f2, f3, f4}) <= 1e-12,
                                   "f2: " + detail::num(f2) + ", f3: " + detail::num(f3) + ", f4: " + detail::num(f4)));
  const double g52 = g_q(0.0, 2.5);
  s.checks.push_back(detail::check("g52-limit-at-zero", std::abs(g52 - 5.0 / 96.0) <= 1e-12 && g52 > 0,
                                   "g_{5/2}(0) = " + detail::num(g52) + " (exact 5/96; positive)"));
  return s;
}

inline SuiteResult verify_appendix_d(std::uint64_t seed = 0) {
  SuiteResult s{"appendix-d", {}};
  Rng rng(mix_seed(seed, 0xD));
  std::uniform_real_distribution<double> ux(0.0, 1.0), ut(1.0, 8.0), ua(2.0, 8.0);
  std::size_t bad_sum = 0, bad_mean = 0;
  for (int i = 0; i < 10000; ++i) {
    if (!power_sum_inequality(ux(rng), ut(rng))) ++bad_sum;
    std::vector<double> v(2 + static_cast<std::size_t>(i % 5));
    for (auto& e : v) e = ux(rng);
    if (!power_mean_inequality(v, ua(rng))) ++bad_mean;
  }
  s.checks.push_back(detail::check("power-sum", bad_sum == 0, "(1+x)^t >= 1+x^t: " + std::to_string(bad_sum) + " violations in 10000 samples"));
  s.checks.push_back(detail::check("power-mean", bad_mean == 0,
                                   "(sum x^2)^(a/2) >= sum x^a: " + std::to_string(bad_mean) + " violations in 10000 samples"));
  s.checks.push_back(detail::check("edge-cases", power_sum_inequality(0.0, 3.7) && power_sum_inequality(1.0, 2.0),
                                   "x=0 equality and x=1, t=2 (4 >= 2)"));
  return s;
}

struct SweepConfig {
  std::size_t states_per_n = 500;
  std::vector<std::size_t> qubit_counts{3, 4, 5};
  std::size_t q_points = 25;
  std::vector<double> alphas{2.0, 2.5, 3.0, 4.0};
  std::uint64_t seed = 0;
};

inline SuiteResult verify_theorem3_sweep(const SweepConfig& cfg = {}) {
  SuiteResult s{"theorem3-sweep", {}};
  const auto qs = linspace(QParam::critical_low(), QParam::critical_high(), cfg.q_points);
  double min_tee = detail::kInf, min_ckw = detail::kInf, min_alpha = detail::kInf, min_ind = detail::kInf;
  std::size_t count = 0;
  for (std::size_t n : cfg.qubit_counts) {
    Rng rng(mix_seed(cfg.seed, n));
    for (std::size_t i = 0; i < cfg.states_per_n; ++i) {
      const PureState psi = haar_random_state(Dims(n, 2), rng);
      min_ckw = std::min(min_ckw, ckw_check(psi, 0).residual);
      for (double q : qs) {
        const double r = tee_sq_residual(psi, 0, q).residual;
        min_tee = std::min(min_tee, r);
        if (n == 3) min_ind = std::min(min_ind, r);
        for (double a : cfg.alphas) min_alpha = std::min(min_alpha, alpha_residual(psi, 0, q, a).residual);
      }
      ++count;
    }
  }
  const std::string where = " over " + std::to_string(count) + " states x " + std::to_string(qs.size()) + " q values";
  s.checks.push_back(detail::check("tee-squared-monogamy", min_tee >= -1e-8, "min residual " + detail::num(min_tee) + where));
  s.checks.push_back(detail::check("ckw-monogamy", min_ckw >= -1e-9, "min CKW residual " + detail::num(min_ckw)));
  s.checks.push_back(detail::check("alpha-power-monogamy", min_alpha >= -1e-8, "min residual over alpha in {2,2.5,3,4}: " + detail::num(min_alpha)));
  s.checks.push_back(detail::check("indicator-nonnegative", min_ind >= -1e-8, "min three-qubit indicator " + detail::num(min_ind)));
  return s;
}

inline SuiteResult verify_examples(const RoofConfig& roof = {}) {
  SuiteResult s{"examples", {}};
  const double q1 = find_root_q([](double q) { return antisymmetric_residual(q); }, 1.1, 2.0);
  s.checks.push_back(detail::check("antisymmetric-root", std::abs(q1 - 1.619) <= 1e-3, "q1 = " + detail::num(q1)));
  const double q2 = find_root_q([](double q) { return qutrit_two_qubit_residual(q); }, 2.0, 3.0);
  s.checks.push_back(detail::check("qutrit-two-qubit-root", std::abs(q2 - 2.471) <= 2e-3, "q2 = " + detail::num(q2)));
  s.checks.push_back(detail::check("antisymmetric-positive-at-qc1", antisymmetric_residual(QParam::critical_low()) > 0,
                                   "residual at q_c1 = " + detail::num(antisymmetric_residual(QParam::critical_low()))));

  // The closed form for the 4x2x2 state is claimed nonnegative for q in [1, q_c2].
  double worst = detail::kInf, worst_theta = 0, worst_q = 0;
  for (double theta : linspace(0.0, 2.0 * std::numbers::pi, 201))
    for (double q : linspace(1.01, 4.30, 200)) {
      const double r = ququart_residual(theta, q);
      if (r < worst) {
        worst = r;
        worst_theta = theta;
        worst_q = q;
      }
    }
  s.checks.push_back(detail::check("ququart-nonnegative", worst >= -1e-10,
                                   "min residual " + detail::num(worst) + " at theta=" + detail::num(worst_theta) + ", q=" + detail::num(worst_q)));
  double below = detail::kInf;
  for (double theta : linspace(0.0, 2.0 * std::numbers::pi, 201))
    for (double q : linspace(QParam::critical_low(), 0.999, 50)) below = std::min(below, ququart_residual(theta, q));
  s.checks.push_back(Check{"ququart-below-one", true, "min residual on q in [q_c1, 1): " + detail::num(below), true});

  // Pipeline cross-checks at q = 2 against the closed forms.
  const double p3 = tee_sq_residual_general(ququart_state(std::numbers::pi / 4), 0, 2.0, roof).residual;
  const double p4 = tee_sq_residual_general(antisymmetric_qutrit_state(), 0, 2.0, roof).residual;
  const double p5 = tee_sq_residual_general(qutrit_two_qubit_state(), 0, 2.0, roof).residual;
  s.checks.push_back(detail::check("ququart-pipeline", std::abs(p3 - 1.0 / 16.0) <= 2e-3, "pipeline " + detail::num(p3) + " vs 1/16"));
  s.checks.push_back(detail::check("antisymmetric-pipeline", std::abs(p4 + 1.0 / 18.0) <= 1e-6, "pipeline " + detail::num(p4) + " vs -1/18"));
  s.checks.push_back(detail::check("qutrit-two-qubit-pipeline", std::abs(p5 - 4.0 / 81.0) <= 1e-6, "pipeline " + detail::num(p5) + " vs 4/81"));

  // W-state indicator.
  double wmin = detail::kInf;
  for (std::size_t n : {3, 6, 9, 11})
    for (double q : linspace(QParam::critical_low(), QParam::critical_high(), 200)) wmin = std::min(wmin, w_indicator_closed_form(n, q));
  s.checks.push_back(detail::check("w-indicator-positive", wmin > 0, "min over N in {3,6,9,11}: " + detail::num(wmin)));
  double wdiff = 0.0;
  for (std::size_t n = 3; n <= 5; ++n)
    for (double q : linspace(QParam::critical_low(), QParam::critical_high(), 25))
      wdiff = std::max(wdiff, std::abs(indicator(w_state(n), q).value - w_indicator_closed_form(n, q)));
  s.checks.push_back(detail::check("w-indicator-pipeline", wdiff <= 1e-9, "max |pipeline - closed form| = " + detail::num(wdiff)));
  double gmin = detail::kInf, gzero = 0.0;
  for (double q : {0.7, 1.0, 2.0, 2.5, 4.3}) {
    for (double theta : parse_range("0:pi:32"))
      for (double phi : parse_range("0:2pi:32")) gmin = std::min(gmin, indicator(generalized_w(theta, phi), q).value);
    for (double phi : {std::numbers::pi / 2, std::numbers::pi, 1.5 * std::numbers::pi, 2 * std::numbers::pi})
      gzero = std::max(gzero, std::abs(indicator(generalized_w(std::numbers::pi / 2, phi), q).value));
  }
  s.checks.push_back(detail::check("generalized-w-nonnegative", gmin >= -1e-8, "min indicator " + detail::num(gmin)));
  s.checks.push_back(detail::check("generalized-w-separable-zeros", gzero <= 1e-8, "max |indicator| at theta=pi/2 " + detail::num(gzero)));
  return s;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed = 0, std::size_t restarts = 32) {
  RoofConfig roof;
  roof.seed = seed;
  roof.restarts = restarts;
  if (name == "appendix-a") return verify_appendix_a();
  if (name == "appendix-b") return verify_appendix_b();
  if (name == "appendix-c") return verify_appendix_c();
  if (name == "appendix-d") return verify_appendix_d(seed);
  if (name == "theorem3-sweep") {
    SweepConfig cfg;
    cfg.seed = seed;
    return verify_theorem3_sweep(cfg);
  }
  if (name == "examples") return verify_examples(roof);
  throw InvalidArgument("unknown verify suite '" + name + "' (expected one of appendix-a, appendix-b, appendix-c, appendix-d, theorem3-sweep, examples, all)");
}

}  // namespace tqent
