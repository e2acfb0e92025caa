#include <gtest/gtest.h>

#include <sstream>

#include "oracle.hpp"
#include "tqent/analysis.hpp"

using namespace tqent;

namespace {

long double f_sq(long double x, long double q) {
  const long double f = oracle::f_q(x, q);
  return f * f;
}

}  // namespace

TEST(Critical, RootsMatchFrozenValues) {
  const auto [lo, hi] = critical_q();
  EXPECT_NEAR(lo, oracle::kCriticalLow, 1e-13);
  EXPECT_NEAR(hi, oracle::kCriticalHigh, 1e-13);
  EXPECT_NEAR(critical_cubic(lo), 0.0, 1e-12);
  EXPECT_NEAR(critical_cubic(1.0), 0.0, 0.0);
}

TEST(Curvature, SecondDerivativeInCMatchesOracle) {
  for (double q : {0.75, 1.3, 2.2, 3.6, 4.25})
    for (double c : {0.15, 0.4, 0.7, 0.93}) {
      const long double fd = oracle::second_derivative([q](long double t) { return oracle::f_q(t * t, q); }, c, 1e-3L);
      EXPECT_NEAR(d2_fq_wrt_C(q, c), static_cast<double>(fd), 1e-7 * std::max(1.0, std::abs(static_cast<double>(fd))))
          << "q=" << q << " c=" << c;
    }
  EXPECT_THROW(d2_fq_wrt_C(2.0, 1.0), DomainError);
  EXPECT_THROW(d2_fq_wrt_C(2.0, 0.0), DomainError);
}

TEST(Curvature, GqIsSecondDerivativeOfFq) {
  for (double q : {0.8, 1.5, 2.5, 3.5, 4.2})
    for (double x : {0.05, 0.3, 0.6, 0.9}) {
      const long double fd = oracle::second_derivative([q](long double t) { return oracle::f_q(t, q); }, x, 1e-3L);
      EXPECT_NEAR(g_q(x, q), static_cast<double>(fd), 1e-7) << "q=" << q << " x=" << x;
    }
}

TEST(Curvature, LqIsSecondDerivativeOfFqSquared) {
  for (double q : {0.8, 1.5, 2.5, 3.5, 4.2})
    for (double x : {0.05, 0.3, 0.6, 0.9}) {
      const long double fd = oracle::second_derivative([q](long double t) { return f_sq(t, q); }, x, 1e-3L);
      EXPECT_NEAR(l_q(x, q), static_cast<double>(fd), 1e-7) << "q=" << q << " x=" << x;
    }
}

TEST(Curvature, EndpointLimits) {
  EXPECT_EQ(g_q(0.0, 1.5), -INFINITY);
  EXPECT_NEAR(g_q(0.0, 2.5), 5.0 / 96.0, 1e-15);
  EXPECT_NEAR(g_q(1e-9, 2.5), 5.0 / 96.0, 1e-4);
  EXPECT_EQ(l_q(0.0, 0.9), INFINITY);
  EXPECT_NEAR(l_q(0.0, 1.5), 1.5 * 1.5 / (8 * 0.25), 1e-15);
  EXPECT_NEAR(l_q(1e-10, 1.5), l_q(0.0, 1.5), 1e-3);
  EXPECT_NEAR(l_q(0.0, 4.0), 2.0 / 9.0, 1e-15);
  EXPECT_THROW(g_q(1.0, 2.0), DomainError);
  EXPECT_THROW(l_q(-0.1, 2.0), DomainError);
}

TEST(Curvature, UnitLimitMatchesNearbyValue) {
  for (double q : {0.8, 2.0, 3.0, 4.0}) EXPECT_NEAR(d2_fq_wrt_C(q, 1.0 - 1e-7), d2_fq_wrt_C_at_unit(q), 1e-5);
  EXPECT_NEAR(d2_fq_wrt_C_at_unit(2.0), 1.0, 1e-15);
  EXPECT_NEAR(d2_fq_wrt_C_at_unit(4.0), 4.0 / 24.0, 1e-15);
}

TEST(Brent, FindsRootsAndNestsBrackets) {
  double prev_lo = 1.0, prev_hi = 2.0;
  bool nested = true;
  const auto r = brent_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, [&](double lo, double hi) {
    nested = nested && lo >= prev_lo - 1e-15 && hi <= prev_hi + 1e-15;
    prev_lo = lo;
    prev_hi = hi;
  });
  EXPECT_NEAR(r.root, std::numbers::sqrt2, 1e-13);
  EXPECT_TRUE(nested);
  EXPECT_LT(r.iterations, 20u);
}

TEST(Brent, RejectsMissingSignChange) {
  EXPECT_THROW(find_root_q([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
  EXPECT_THROW(find_root_q([](double) { return NAN; }, -1.0, 1.0), DomainError);
}

TEST(SignScan, ReportsViolations) {
  const auto xs = linspace(0.1, 0.9, 5);
  const auto qs = linspace(2.1, 2.9, 5);
  const auto ok = scan_sign(DerivativeKind::g_q, xs, qs, ClaimedSign::nonnegative, "D2");
  EXPECT_TRUE(ok.passed());
  EXPECT_EQ(ok.samples.size(), 25u);
  const auto bad = scan_sign(DerivativeKind::g_q, xs, qs, ClaimedSign::nonpositive, "wrong");
  EXPECT_FALSE(bad.passed());
  EXPECT_EQ(bad.violations.size(), 25u);
  std::ostringstream csv;
  ok.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, 7), "x,q,gq\n");
  EXPECT_THROW(scan_sign(DerivativeKind::l_q, linspace(0.0, 1.0, 3), qs, ClaimedSign::positive), InvalidArgument);
}

TEST(Grids, LinspaceAndInterior) {
  const auto v = linspace(0.0, 1.0, 11);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_NEAR(v[3], 0.3, 1e-16);
  const auto in = interior_points(2.0, 3.0, 4);
  EXPECT_GT(in.front(), 2.0);
  EXPECT_LT(in.back(), 3.0);
  EXPECT_THROW(linspace(0.0, 1.0, 1), InvalidArgument);
}

TEST(Inequalities, ScalarForms) {
  EXPECT_TRUE(power_sum_inequality(0.5, 2.0));
  EXPECT_TRUE(power_sum_inequality(1.0, 1.0));
  EXPECT_TRUE(power_mean_inequality(std::vector<double>{0.3, 0.4, 0.5}, 3.0));
  EXPECT_THROW(power_sum_inequality(1.5, 2.0), DomainError);
  EXPECT_THROW(power_sum_inequality(0.5, 0.5), DomainError);
  EXPECT_THROW(power_mean_inequality(std::vector<double>{0.3}, 1.0), DomainError);
}

TEST(SecondDifference, ExactOnCubics) {
  auto f = [](double x) { return x * x * x - 2 * x; };
  EXPECT_NEAR(second_derivative_fd(f, 0.7), 6 * 0.7, 1e-9);
}
