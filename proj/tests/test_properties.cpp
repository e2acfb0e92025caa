// Randomized invariants with seeded generators.

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "tqent/analysis.hpp"
#include "tqent/monogamy.hpp"

using namespace tqent;

namespace {

// U acting on subsystem k of a multiqubit pure state.
PureState apply_local(const PureState& psi, std::size_t k, const CMatrix& u) {
  const std::size_t n = psi.num_subsystems();
  const std::size_t stride = std::size_t{1} << (n - 1 - k);
  std::vector<cplx> out(psi.dimension());
  for (std::size_t idx = 0; idx < psi.dimension(); ++idx) {
    if (idx & stride) continue;
    const cplx a0 = psi[idx], a1 = psi[idx | stride];
    out[idx] = u(0, 0) * a0 + u(0, 1) * a1;
    out[idx | stride] = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return PureState::normalized(psi.dims(), std::move(out));
}

}  // namespace

TEST(Properties, LocalUnitaryInvariance) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 2, 2, 2}, rng);
    PureState rotated = psi;
    for (std::size_t k = 0; k < 4; ++k) rotated = apply_local(rotated, k, haar_unitary(2, rng));
    for (double q : {0.8, 2.0, 3.7}) {
      EXPECT_NEAR(tee_pure(psi, {0, 2}, q), tee_pure(rotated, {0, 2}, q), 1e-12);
      EXPECT_NEAR(tee_sq_residual(psi, 1, q).residual, tee_sq_residual(rotated, 1, q).residual, 1e-10);
    }
    EXPECT_NEAR(ckw_check(psi, 0).residual, ckw_check(rotated, 0).residual, 1e-10);
  }
}

TEST(Properties, FqMonotoneAndSquareConvex) {
  const auto xs = linspace(0.0, 1.0, 100);
  for (double q : linspace(QParam::critical_low(), QParam::critical_high(), 100)) {
    for (std::size_t i = 1; i < xs.size(); ++i) ASSERT_LE(f_q(xs[i - 1], q), f_q(xs[i], q) + 1e-12) << q;
    for (std::size_t i = 0; i < xs.size(); i += 7)
      for (std::size_t j = i + 1; j < xs.size(); j += 5) {
        const double mid = f_q(0.5 * (xs[i] + xs[j]), q);
        const double a = f_q(xs[i], q), b = f_q(xs[j], q);
        ASSERT_LE(mid * mid, 0.5 * (a * a + b * b) + 1e-10) << "q=" << q << " x=" << xs[i] << "," << xs[j];
      }
  }
}

TEST(Properties, TsallisBounds) {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const PureState psi = haar_random_state(Dims{3, 2, 2}, rng);
    const auto rho = reduced_state(psi, {0});
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-13);
    for (double q : {0.5, 1.0, 2.0, 4.0}) {
      const double s = tsallis_entropy(rho, q);
      const double smax = q == 1.0 ? std::log(3.0) : (1.0 - std::pow(3.0, 1.0 - q)) / (q - 1.0);
      EXPECT_GE(s, -1e-15);
      EXPECT_LE(s, smax + 1e-13);
    }
  }
}

TEST(Properties, ResidualsNonnegativeOnRandomStates) {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 3);
    const PureState psi = haar_random_state(Dims(n, 2), rng);
    EXPECT_GE(ckw_check(psi, trial % n).residual, -1e-9);
    for (double q : {QParam::critical_low(), 1.0, 2.0, 3.0, QParam::critical_high()}) {
      EXPECT_GE(tee_sq_residual(psi, trial % n, q).residual, -1e-8);
    }
  }
}

TEST(Properties, PairTermNeverExceedsCut) {
  // Each pair TEE is bounded by the focus|rest TEE.
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState psi = haar_random_state(Dims{2, 2, 2}, rng);
    const auto r = tee_sq_residual(psi, 0, 2.0);
    for (double t : r.terms) EXPECT_LE(t, r.lhs + 1e-12);
  }
}
