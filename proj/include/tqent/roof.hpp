#pragma once

// Numerical convex roof: minimizes sum_i p_i g(psi_i) over the pure-state
// decompositions of a density matrix.
//
// Every decomposition with m members is generated by an m x r isometry V
// acting on the scaled eigenvectors sqrt(lambda_j)|e_j> of rho
// (Schroedinger-HJW). The cost is minimized over V on the complex Stiefel
// manifold with Riemannian conjugate gradients (Polak-Ribiere+, projection
// transport, QR retraction, Armijo backtracking). Euclidean gradients come from
// central finite differences. Restarts draw V Haar-uniformly from a seeded
// generator; the best restart wins. Results are upper bounds on the roof.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "tqent/measures.hpp"

namespace tqent {

// Pure-state functional g(psi), evaluated on unit-norm amplitudes.
using PureCost = std::function<double(std::span<const cplx>)>;

struct RoofConfig {
  std::size_t max_ensemble_size = 0;  // 0 selects 2 * rank
  std::size_t restarts = 32;
  std::size_t max_iterations = 2000;
  double tolerance = 1e-7;  // Riemannian gradient norm at which a restart stops
  std::uint64_t seed = 0;
};

struct RoofResult {
  double value;
  Decomposition decomposition;
  bool converged;          // best restart stopped before the iteration cap
  std::size_t iterations;  // iterations of the best restart
  std::size_t best_restart;
};

inline constexpr std::size_t kRoofMaxDimension = 64;
inline constexpr std::size_t kRoofMaxRank = 8;

namespace detail {

inline constexpr double kRoofEigenFloor = 1e-10;
inline constexpr double kMemberWeightFloor = 1e-14;
inline constexpr double kFiniteDifferenceStep = 1e-6;

// Scaled support of rho: columns sqrt(lambda_j) e_j for lambda_j > 1e-10, with
// the retained eigenvalues renormalized to unit trace.
struct ScaledEigenbasis {
  std::size_t dim = 0;
  std::size_t rank = 0;
  std::vector<cplx> vectors;  // rank x dim, row j = sqrt(lambda_j) e_j
};

inline ScaledEigenbasis scaled_eigenbasis(const DensityMatrix& rho) {
  const EigenDecomposition eig = hermitian_eigen(rho.matrix());
  ScaledEigenbasis b;
  b.dim = rho.dimension();
  double kept = 0.0;
  for (double v : eig.spectrum.values)
    if (v > kRoofEigenFloor) {
      kept += v;
      ++b.rank;
    }
  b.vectors.resize(b.rank * b.dim);
  for (std::size_t j = 0; j < b.rank; ++j) {
    const double scale = std::sqrt(eig.spectrum.values[j] / kept);
    for (std::size_t i = 0; i < b.dim; ++i) b.vectors[j * b.dim + i] = scale * eig.vectors(i, j);
  }
  return b;
}

inline double real_inner(const CMatrix& a, const CMatrix& b) {
  double s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += ea[k].real() * eb[k].real() + ea[k].imag() * eb[k].imag();
  return s;
}

// Projection onto the tangent space of the Stiefel manifold at V:
// X - V sym(V^dagger X).
inline CMatrix tangent_projection(const CMatrix& v, const CMatrix& x) {
  CMatrix s = v.adjoint() * x;
  const CMatrix sym = (s + s.adjoint()) * cplx(0.5);
  return x - v * sym;
}

class RoofObjective {
 public:
  RoofObjective(const ScaledEigenbasis& basis, const PureCost& cost)
      : basis_(basis), cost_(cost), phi_(basis.dim), unit_(basis.dim) {}

  // p_i g(phi_i / |phi_i|) for the member generated by one row of V.
  double member(const cplx* row) const {
    const std::size_t d = basis_.dim;
    std::fill(phi_.begin(), phi_.end(), cplx{});
    for (std::size_t j = 0; j < basis_.rank; ++j) {
      const cplx c = row[j];
      if (c == cplx{}) continue;
      const cplx* u = &basis_.vectors[j * d];
      for (std::size_t i = 0; i < d; ++i) phi_[i] += c * u[i];
    }
    double w = 0.0;
    for (const auto& a : phi_) w += std::norm(a);
    if (w < kMemberWeightFloor) return 0.0;
    const double inv = 1.0 / std::sqrt(w);
    for (std::size_t i = 0; i < d; ++i) unit_[i] = phi_[i] * inv;
    return w * cost_(unit_);
  }

  double total(const CMatrix& v) const {
    double f = 0.0;
    for (std::size_t i = 0; i < v.rows(); ++i) f += member(&v.entries()[i * v.cols()]);
    return f;
  }

  // Euclidean gradient dF/dRe + i dF/dIm by central differences; row i of V
  // only influences member i.
  CMatrix gradient(const CMatrix& v) const {
    const double h = kFiniteDifferenceStep;
    CMatrix g(v.rows(), v.cols());
    std::vector<cplx> row(v.cols());
    for (std::size_t i = 0; i < v.rows(); ++i) {
      for (std::size_t j = 0; j < v.cols(); ++j) row[j] = v(i, j);
      for (std::size_t j = 0; j < v.cols(); ++j) {
        const cplx orig = row[j];
        row[j] = orig + h;
        const double fp = member(row.data());
        row[j] = orig - h;
        const double fm = member(row.data());
        row[j] = orig + cplx(0.0, h);
        const double fpi = member(row.data());
        row[j] = orig - cplx(0.0, h);
        const double fmi = member(row.data());
        row[j] = orig;
        g(i, j) = cplx((fp - fm) / (2.0 * h), (fpi - fmi) / (2.0 * h));
      }
    }
    return g;
  }

 private:
  const ScaledEigenbasis& basis_;
  const PureCost& cost_;
  mutable std::vector<cplx> phi_;
  mutable std::vector<cplx> unit_;
};

struct DescentOutcome {
  CMatrix v;
  double value;
  bool converged;
  std::size_t iterations;
};

inline DescentOutcome riemannian_cg(const RoofObjective& obj, CMatrix v, const RoofConfig& cfg) {
  constexpr double kArmijo = 1e-4;
  constexpr std::size_t kMaxBacktracks = 40;
  constexpr std::size_t kStallWindow = 10;

  double f = obj.total(v);
  CMatrix grad = tangent_projection(v, obj.gradient(v));
  double gnorm2 = real_inner(grad, grad);
  CMatrix dir = grad * cplx(-1.0);
  double step_length = 0.25;  // length |t d| of the first trial step
  std::size_t stalled = 0;

  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (std::sqrt(gnorm2) <= cfg.tolerance) return {std::move(v), f, true, it};
    double slope = real_inner(grad, dir);
    if (slope >= 0.0) {
      dir = grad * cplx(-1.0);
      slope = -gnorm2;
    }
    const double dnorm = std::sqrt(real_inner(dir, dir));
    double t = step_length / dnorm;
    bool accepted = false;
    CMatrix next;
    double fnext = f;
    for (std::size_t k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
      try {
        next = orthonormal_columns(v + dir * cplx(t));
      } catch (const DomainError&) {
        continue;
      }
      fnext = obj.total(next);
      if (fnext <= f + kArmijo * t * slope) {
        accepted = true;
        break;
      }
    }
    // No decrease resolvable at this precision: a (possibly nonsmooth) minimum.
    if (!accepted) return {std::move(v), f, true, it + 1};

    stalled = (f - fnext) <= 1e-15 * std::max(1.0, std::abs(f)) ? stalled + 1 : 0;
    step_length = std::min(1.0, 2.0 * t * dnorm);
    v = std::move(next);
    f = fnext;
    if (stalled >= kStallWindow) return {std::move(v), f, true, it + 1};

    const CMatrix grad_old = tangent_projection(v, grad);
    const CMatrix dir_old = tangent_projection(v, dir);
    const double gnorm2_old = gnorm2;
    grad = tangent_projection(v, obj.gradient(v));
    gnorm2 = real_inner(grad, grad);
    const double beta = std::max(0.0, (gnorm2 - real_inner(grad, grad_old)) / gnorm2_old);
    dir = grad * cplx(-1.0) + dir_old * cplx(beta);
  }
  return {std::move(v), f, std::sqrt(gnorm2) <= cfg.tolerance, it};
}

inline void check_roof_limits(const DensityMatrix& rho, std::size_t rank) {
  if (rho.dimension() > kRoofMaxDimension) {
    throw InvalidArgument("convex roof: total dimension " + std::to_string(rho.dimension()) + " exceeds " +
                          std::to_string(kRoofMaxDimension));
  }
  if (rank > kRoofMaxRank) {
    throw InvalidArgument("convex roof: rank " + std::to_string(rank) + " exceeds " + std::to_string(kRoofMaxRank));
  }
}

inline Decomposition decomposition_from_rows(const ScaledEigenbasis& basis, const CMatrix& v, const Dims& dims) {
  std::vector<EnsembleMember> members;
  std::vector<cplx> phi(basis.dim);
  for (std::size_t i = 0; i < v.rows(); ++i) {
    std::fill(phi.begin(), phi.end(), cplx{});
    for (std::size_t j = 0; j < basis.rank; ++j)
      for (std::size_t k = 0; k < basis.dim; ++k) phi[k] += v(i, j) * basis.vectors[j * basis.dim + k];
    const double w = PureState::norm_squared(phi);
    if (w < 1e-12) continue;
    members.push_back(EnsembleMember{w, PureState::normalized(dims, phi)});
  }
  // Dropped members carry < 1e-12 weight each; restore exact normalization.
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  for (auto& m : members) m.weight /= total;
  return Decomposition(std::move(members));
}

}  // namespace detail

// Ensemble generated by the isometry V (m x r) from the eigendecomposition of
// rho: |phi_i> = sum_j V[i,j] sqrt(lambda_j) |e_j>, p_i = <phi_i|phi_i>.
inline Decomposition decomposition_from_isometry(const DensityMatrix& rho, const CMatrix& v) {
  const detail::ScaledEigenbasis basis = detail::scaled_eigenbasis(rho);
  if (v.cols() != basis.rank) {
    throw InvalidArgument("decomposition_from_isometry: V has " + std::to_string(v.cols()) +
                          " columns but rho has rank " + std::to_string(basis.rank));
  }
  if (v.rows() < basis.rank) throw InvalidArgument("decomposition_from_isometry: V needs at least rank(rho) rows");
  const double err = max_abs_diff(v.adjoint() * v, CMatrix::identity(basis.rank));
  if (err > 1e-8) {
    throw DomainError("decomposition_from_isometry: V is not an isometry (|V^dagger V - I| = " + std::to_string(err) + ")");
  }
  return detail::decomposition_from_rows(basis, v, rho.dims());
}

inline double evaluate_cost(const Decomposition& dec, const PureCost& cost) {
  double s = 0.0;
  for (const auto& m : dec.members()) s += m.weight * cost(m.state.amplitudes());
  return s;
}

inline RoofResult minimize_roof(const DensityMatrix& rho, const PureCost& cost, const RoofConfig& cfg = {}) {
  if (cfg.restarts < 1) throw InvalidArgument("convex roof: restarts must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw InvalidArgument("convex roof: tolerance must be positive");
  if (rho.dimension() > kRoofMaxDimension) detail::check_roof_limits(rho, 0);
  const detail::ScaledEigenbasis basis = detail::scaled_eigenbasis(rho);
  detail::check_roof_limits(rho, basis.rank);
  const std::size_t r = basis.rank;
  const std::size_t m = cfg.max_ensemble_size == 0 ? 2 * r : cfg.max_ensemble_size;
  if (m < r) {
    throw InvalidArgument("convex roof: max_ensemble_size " + std::to_string(m) + " is below rank " + std::to_string(r));
  }

  if (r == 1) {
    const CMatrix v = CMatrix::identity(1);
    Decomposition dec = detail::decomposition_from_rows(basis, v, rho.dims());
    const double value = evaluate_cost(dec, cost);
    return RoofResult{value, std::move(dec), true, 1, 0};
  }

  const detail::RoofObjective objective(basis, cost);
  std::optional<detail::DescentOutcome> best;
  std::size_t best_restart = 0;
  for (std::size_t k = 0; k < cfg.restarts; ++k) {
    CMatrix start(m, r);
    if (k == 0) {
      for (std::size_t j = 0; j < r; ++j) start(j, j) = 1.0;
    } else {
      Rng rng(mix_seed(cfg.seed, k));
      start = haar_isometry(m, r, rng);
    }
    detail::DescentOutcome out = detail::riemannian_cg(objective, std::move(start), cfg);
    if (!best || out.value < best->value) {
      best = std::move(out);
      best_restart = k;
    }
  }
  Decomposition dec = detail::decomposition_from_rows(basis, best->v, rho.dims());
  const double value = evaluate_cost(dec, cost);
  return RoofResult{value, std::move(dec), best->converged, best->iterations, best_restart};
}

// ---------------------------------------------------------------------------
// Cost functionals

// T_q(rho_A) of a pure state.
inline PureCost tee_cost(const Dims& dims, const Subsystems& party_a, QParam q) {
  auto cut = std::make_shared<const Bipartition>(dims, detail::normalize_keep(dims, party_a));
  if (cut->traced_dim() == 1) throw InvalidArgument("tee_cost: party must be a proper subset");
  return [cut, q](std::span<const cplx> amps) { return tee_from_marginal(cut->smaller_marginal(amps), q); };
}

// sqrt(2(1 - Tr rho_A^2)) of a pure state.
inline PureCost concurrence_cost(const Dims& dims, const Subsystems& party_a) {
  auto cut = std::make_shared<const Bipartition>(dims, detail::normalize_keep(dims, party_a));
  if (cut->traced_dim() == 1) throw InvalidArgument("concurrence_cost: party must be a proper subset");
  return [cut](std::span<const cplx> amps) { return concurrence_from_marginal(cut->smaller_marginal(amps)); };
}

// Residual T_q^2(focus|rest) - sum_j f_q^2(C^2(focus, j)) of a pure multiqubit state.
inline PureCost tee_sq_residual_cost(const Dims& dims, std::size_t focus, QParam q) {
  if (focus >= dims.size()) throw InvalidArgument("residual cost: focus index out of range");
  struct Cuts {
    Bipartition cut;
    std::vector<Bipartition> pairs;
  };
  auto cuts = std::make_shared<Cuts>(Cuts{Bipartition(dims, Subsystems{focus}), {}});
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j != focus) cuts->pairs.emplace_back(dims, Subsystems{std::min(focus, j), std::max(focus, j)});
  }
  return [cuts, q](std::span<const cplx> amps) {
    const double lhs = tee_from_marginal(cuts->cut.smaller_marginal(amps), q);
    double r = lhs * lhs;
    for (const auto& pair : cuts->pairs) {
      const double c = pair_concurrence(pair, amps).c;
      const double t = f_q(c * c, q);
      r -= t * t;
    }
    return r;
  };
}

// Convex-roof TEE of a mixed state across party_a | rest (upper bound).
inline RoofResult roof_tee(const DensityMatrix& rho, const Subsystems& party_a, QParam q, const RoofConfig& cfg = {}) {
  return minimize_roof(rho, tee_cost(rho.dims(), party_a, q), cfg);
}

// Convex-roof concurrence of a 2 x d state (upper bound; Wootters for 2 x 2).
inline RoofResult roof_concurrence(const DensityMatrix& rho, const RoofConfig& cfg = {}) {
  if (rho.num_subsystems() != 2 || rho.dims()[0] != 2) {
    throw InvalidArgument("roof_concurrence: expected dims [2,d], got " + detail::dims_string(rho.dims()));
  }
  return minimize_roof(rho, concurrence_cost(rho.dims(), Subsystems{0}), cfg);
}

}  // namespace tqent
