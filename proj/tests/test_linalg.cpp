#include <gtest/gtest.h>

#include "helpers.hpp"
#include "tqent/linalg.hpp"

using namespace tqent;

namespace {

CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const CMatrix g = complex_gaussian_matrix(n, n, rng);
  CMatrix h = g;
  h += g.adjoint();
  return h;
}

}  // namespace

TEST(Linalg, EigenDecompositionReconstructs) {
  Rng rng(11);
  for (std::size_t n : {1, 2, 3, 5, 8, 16}) {
    const CMatrix h = random_hermitian(n, rng);
    const auto eig = hermitian_eigen(h);
    CMatrix rebuilt = eig.vectors * CMatrix::diagonal(eig.spectrum.values) * eig.vectors.adjoint();
    EXPECT_LT(max_abs_diff(rebuilt, h), 1e-10) << "n=" << n;
    EXPECT_LT(max_abs_diff(eig.vectors.adjoint() * eig.vectors, CMatrix::identity(n)), 1e-10);
    EXPECT_TRUE(std::is_sorted(eig.spectrum.values.rbegin(), eig.spectrum.values.rend()));
  }
}

TEST(Linalg, EigenvaluesOfKnownMatrix) {
  // Pauli Y has eigenvalues +-1; diag entries pass through.
  const CMatrix y{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}};
  const auto s = hermitian_eigenvalues(y);
  EXPECT_NEAR(s[0], 1.0, 1e-14);
  EXPECT_NEAR(s[1], -1.0, 1e-14);
  const auto d = hermitian_eigenvalues(CMatrix::diagonal({0.1, 0.7, 0.2}));
  EXPECT_NEAR(d[0], 0.7, 1e-15);
  EXPECT_NEAR(d[2], 0.1, 1e-15);
}

TEST(Linalg, EigenRejectsNonHermitian) {
  const CMatrix m{{1.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(hermitian_eigen(m), InvalidArgument);
}

TEST(Linalg, KronMatchesDefinition) {
  const CMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const CMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 4u);
  EXPECT_EQ(k(0, 1), cplx(1.0));
  EXPECT_EQ(k(1, 0), cplx(1.0));
  EXPECT_EQ(k(2, 1), cplx(3.0));
  EXPECT_EQ(k(3, 2), cplx(4.0));
  EXPECT_EQ(k(3, 3), cplx(0.0));
}

TEST(Linalg, PsdSqrtSquaresBack) {
  Rng rng(5);
  const CMatrix g = complex_gaussian_matrix(4, 4, rng);
  const CMatrix p = g * g.adjoint();
  const CMatrix r = psd_sqrt(p);
  EXPECT_LT(max_abs_diff(r * r, p), 1e-10);
  EXPECT_THROW(psd_sqrt(CMatrix::diagonal({1.0, -0.5})), DomainError);
}

TEST(Linalg, OrthonormalColumns) {
  Rng rng(2);
  const CMatrix q = orthonormal_columns(complex_gaussian_matrix(6, 3, rng));
  EXPECT_LT(max_abs_diff(q.adjoint() * q, CMatrix::identity(3)), 1e-13);
  const CMatrix dependent{{1.0, 2.0}, {1.0, 2.0}};
  EXPECT_THROW(orthonormal_columns(dependent), DomainError);
  EXPECT_THROW(orthonormal_columns(CMatrix(2, 3)), InvalidArgument);
}

TEST(Linalg, PartialTraceMatchesBruteForce) {
  Rng rng(7);
  const Dims dims{2, 3, 2};
  const PureState psi = haar_random_state(dims, rng);
  const auto amps = testing_support::amplitudes_of(psi);
  for (const Subsystems& keep : {Subsystems{0}, Subsystems{1}, Subsystems{0, 2}, Subsystems{1, 2}}) {
    const CMatrix rho = partial_trace(psi.projector(), dims, keep);
    EXPECT_LT(testing_support::max_diff(rho, oracle::partial_trace(amps, dims, keep)), 1e-14);
  }
}

TEST(Linalg, PartialTraceOrderedPermutes) {
  Rng rng(8);
  const Dims dims{2, 3};
  const PureState psi = haar_random_state(dims, rng);
  const CMatrix swapped = partial_trace_ordered(psi.projector(), dims, Subsystems{1, 0});
  EXPECT_LT(testing_support::max_diff(swapped, oracle::partial_trace(testing_support::amplitudes_of(psi), dims, {1, 0})), 1e-14);
}

TEST(Linalg, PartialTraceRejectsBadInput) {
  const CMatrix m = CMatrix::identity(4);
  const Dims dims{2, 2};
  EXPECT_THROW(partial_trace(m, dims, Subsystems{2}), InvalidArgument);
  EXPECT_THROW(partial_trace(m, dims, Subsystems{0, 0}), InvalidArgument);
  EXPECT_THROW(partial_trace(CMatrix::identity(3), dims, Subsystems{0}), InvalidArgument);
}
