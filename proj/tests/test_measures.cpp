#include <gtest/gtest.h>

#include "helpers.hpp"
#include "tqent/measures.hpp"

using namespace tqent;

namespace {

DensityMatrix isotropic(double p) {
  const CMatrix bell = bell_state().projector();
  CMatrix m = bell * cplx(p);
  m += CMatrix::identity(4) * cplx((1.0 - p) / 4.0);
  return DensityMatrix(Dims{2, 2}, m);
}

}  // namespace

TEST(QParam, RejectsNonPositive) {
  EXPECT_THROW(QParam(0.0), DomainError);
  EXPECT_THROW(QParam(-1.0), DomainError);
  EXPECT_THROW(QParam(std::nan("")), DomainError);
  EXPECT_THROW(QParam{std::numeric_limits<double>::infinity()}, DomainError);
}

TEST(QParam, Windows) {
  EXPECT_NEAR(QParam::critical_low(), oracle::kCriticalLow, 1e-15);
  EXPECT_NEAR(QParam::critical_high(), oracle::kCriticalHigh, 1e-15);
  EXPECT_TRUE(QParam(QParam::critical_low()).analytic_two_qubit());
  EXPECT_FALSE(QParam(0.69).analytic_two_qubit());
  EXPECT_FALSE(QParam(4.31).analytic_two_qubit());
  EXPECT_TRUE(QParam(2.0).concave_regime());
  EXPECT_FALSE(QParam(2.5).concave_regime());
  EXPECT_TRUE(QParam(3.0).concave_regime());
}

TEST(Tsallis, MatchesTracePowerOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 3, 2}, rng);
    const auto rho = reduced_state(psi, {0, 1});
    const auto lrho = oracle::partial_trace(testing_support::amplitudes_of(psi), psi.dims(), {0, 1});
    for (int q : {2, 3, 4, 5}) {
      EXPECT_NEAR(tsallis_entropy(rho, q), static_cast<double>(oracle::tsallis_integer(lrho, q)), 1e-13);
    }
  }
}

TEST(Tsallis, ContinuousThroughOne) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const double shannon = tsallis_entropy(std::span<const double>(p), 1.0);
  EXPECT_NEAR(shannon, static_cast<double>(oracle::tsallis_spectrum({0.5L, 0.3L, 0.2L}, 1.0L)), 1e-15);
  for (double dq : {1e-4, 1e-8, 1e-12}) {
    EXPECT_NEAR(tsallis_entropy(std::span<const double>(p), 1.0 + dq), shannon, 2 * dq);
    EXPECT_NEAR(tsallis_entropy(std::span<const double>(p), 1.0 - dq), shannon, 2 * dq);
  }
  for (double q : {0.3, 0.8, 1.7, 3.3}) {
    EXPECT_NEAR(tsallis_entropy(std::span<const double>(p), q),
                static_cast<double>(oracle::tsallis_spectrum({0.5L, 0.3L, 0.2L}, q)), 1e-14);
  }
}

TEST(Tsallis, PureAndMaximallyMixed) {
  EXPECT_EQ(tsallis_entropy(DensityMatrix::from_pure(w_state(3)), 2.0), 0.0);
  const auto mixed = DensityMatrix(Dims{3}, CMatrix::identity(3) * cplx(1.0 / 3.0));
  EXPECT_NEAR(tsallis_entropy(mixed, 2.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(tsallis_entropy(mixed, 1.0), std::log(3.0), 1e-15);
}

TEST(Fq, MatchesDefinition) {
  for (double q : {0.7, 1.0, 1.5, 2.0, 3.0, 4.3})
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) EXPECT_NEAR(f_q(x, q), static_cast<double>(oracle::f_q(x, q)), 1e-14);
}

TEST(Fq, IntegerClosedForms) {
  for (double x : {0.0, 0.25, 0.6, 1.0}) {
    EXPECT_NEAR(f_q(x, 2.0), x / 2.0, 1e-15);
    EXPECT_NEAR(f_q(x, 3.0), 3.0 * x / 8.0, 1e-15);
    EXPECT_NEAR(f_q(x, 4.0), (8.0 * x - x * x) / 24.0, 1e-15);
  }
  EXPECT_THROW(f_q(1.5, 2.0), DomainError);
}

TEST(Fq, SmallArgumentStable) {
  // Leading order f_q(x) ~ (x/4) [-ln(x/4) + 1] at q = 1; the naive (1-s)/2
  // route loses all digits near x = 1e-14.
  const double x = 1e-14;
  const double b = x / 4.0;
  EXPECT_NEAR(f_q(x, 1.0), b * (1.0 - std::log(b)), 1e-25);
  EXPECT_NEAR(f_q(x, 2.0), x / 2.0, 1e-27);
}

TEST(Concurrence, WoottersKnownStates) {
  EXPECT_NEAR(concurrence_two_qubit(DensityMatrix::from_pure(bell_state())).c, 1.0, 1e-12);
  EXPECT_NEAR(concurrence_two_qubit(DensityMatrix::from_pure(basis_state(Dims{2, 2}, {0, 1}))).c, 0.0, 1e-12);
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    EXPECT_NEAR(concurrence_two_qubit(isotropic(p)).c, oracle::isotropic_concurrence(p), 1e-7) << "p=" << p;
  }
  EXPECT_THROW(concurrence_two_qubit(DensityMatrix::from_pure(w_state(3))), InvalidArgument);
}

TEST(Concurrence, PureTwoQubitMatchesDeterminant) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 2}, rng);
    const double expected = oracle::pure_pair_concurrence(psi[0], psi[1], psi[2], psi[3]);
    EXPECT_NEAR(concurrence_two_qubit(DensityMatrix::from_pure(psi)).c, expected, 1e-7);
    EXPECT_NEAR(concurrence_pure(psi, {0}).c, expected, 1e-12);
  }
}

TEST(Concurrence, PairRouteMatchesWootters) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 2, 2, 2}, rng);
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 3}, std::pair{1, 2}}) {
      const double fast = pair_concurrence(psi, i, j).c;
      const double slow = concurrence_two_qubit(reduced_state(psi, {std::size_t(i), std::size_t(j)})).c;
      EXPECT_NEAR(fast, slow, 1e-9);
    }
  }
  EXPECT_NEAR(pair_concurrence(w_state(3), 0, 1).c, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pair_concurrence(ghz(3), 0, 2).c, 0.0, 1e-12);
  EXPECT_THROW(pair_concurrence(w_state(3), 1, 1), InvalidArgument);
  EXPECT_THROW(pair_concurrence(qutrit_two_qubit_state(), 0, 1), InvalidArgument);
}

TEST(Concurrence, PureCutsAndErrors) {
  EXPECT_NEAR(concurrence_pure(w_state(3), {0}).c, std::sqrt(8.0) / 3.0, 1e-14);
  EXPECT_NEAR(concurrence_pure(ghz(4), {0, 1}).c, 1.0, 1e-14);
  EXPECT_NEAR(concurrence_pure(antisymmetric_qutrit_state(), {0}).c, std::sqrt(4.0 / 3.0), 1e-14);
  EXPECT_THROW(concurrence_pure(w_state(3), {0, 1, 2}), InvalidArgument);
  EXPECT_THROW(concurrence_pure(w_state(3), {5}), InvalidArgument);
}

TEST(Tee, PureCuts) {
  EXPECT_NEAR(tee_pure(w_state(3), {0}, 2.0), 4.0 / 9.0, 1e-14);
  EXPECT_NEAR(tee_pure(antisymmetric_qutrit_state(), {0}, 2.0), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(tee_pure(ghz(3), {0}, 2.0), 0.5, 1e-14);
  EXPECT_NEAR(tee_pure(bell_state(), {0}, 1.0), std::log(2.0), 1e-14);
}

TEST(Tee, TwoQubitEqualsPureForPureStates) {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 2}, rng);
    for (double q : {0.8, 1.0, 2.0, 3.5, 4.3}) {
      EXPECT_NEAR(tee_two_qubit(DensityMatrix::from_pure(psi), q).value, tee_pure(psi, {0}, q), 1e-7);
    }
  }
}

TEST(Tee, TwoQubitWindow) {
  const auto rho = isotropic(0.9);
  EXPECT_THROW(tee_two_qubit(rho, 5.0), DomainError);
  EXPECT_THROW(tee_two_qubit(rho, 0.5), DomainError);
  const TeeValue forced = tee_two_qubit(rho, 5.0, true);
  EXPECT_TRUE(forced.lower_bound);
  EXPECT_FALSE(tee_two_qubit(rho, 2.0).lower_bound);
  EXPECT_NEAR(tee_two_qubit(rho, 2.0).value, std::pow(oracle::isotropic_concurrence(0.9), 2) / 2.0, 1e-7);
  EXPECT_EQ(tee_two_qubit(isotropic(0.2), 2.0).value, 0.0);
}

TEST(Tee, TwoByD) {
  // Pure 2x3 state with maximally mixed qubit marginal.
  std::vector<cplx> amps(6);
  amps[0] = amps[4] = 1.0 / std::numbers::sqrt2;
  const PureState psi(Dims{2, 3}, amps);
  const auto rho = DensityMatrix::from_pure(psi);
  const auto t = tee_2xd(rho, 2.0, concurrence_pure(psi, {0}));
  EXPECT_NEAR(t.value, 0.5, 1e-14);
  EXPECT_NEAR(t.value, tee_pure(psi, {0}, 2.0), 1e-14);
  EXPECT_FALSE(t.lower_bound);
  EXPECT_EQ(tee_2xd(rho, 2.0, 0.0).value, 0.0);
  EXPECT_TRUE(tee_2xd(rho, 2.5, 1.0).lower_bound);
  EXPECT_THROW(tee_2xd(rho, 2.0, -0.1), DomainError);
  EXPECT_THROW(tee_2xd(DensityMatrix::from_pure(qutrit_two_qubit_state()), 2.0, 0.5), InvalidArgument);
}

TEST(EntanglementOfFormation, BellIsLn2) {
  EXPECT_NEAR(ef_two_qubit(DensityMatrix::from_pure(bell_state())), std::log(2.0), 1e-10);
  EXPECT_NEAR(ef_two_qubit(isotropic(0.3)), 0.0, 1e-12);
}
