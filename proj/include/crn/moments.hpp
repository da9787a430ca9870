#pragma once

#include <vector>

#include "crn/network.hpp"
#include "crn/polynomial.hpp"

namespace crn {

struct NotClosedError : CrnError {
  using CrnError::CrnError;
};
struct InconsistentError : CrnError {
  using CrnError::CrnError;
};

/// Ordered list of non-constant moment multi-indices; the constant moment
/// E[1] = 1 is tracked separately and split into the affine part b at
/// assembly time.
struct MomentBasis {
  std::vector<MultiIndex> indices;
  bool includes_constant = false;

  std::size_t size() const { return indices.size(); }
};

struct ClosureResult {
  MomentBasis basis;
  bool cap_exceeded = false;
  std::vector<MultiIndex> frontier;  // unexpanded indices at cutoff
};

struct LinearMomentSystem {
  MomentBasis basis;
  RatMatrix A;      // N x N
  RatVector b;      // N
  bool operator==(const LinearMomentSystem& o) const {
    return basis.indices == o.basis.indices && A == o.A && b == o.b;
  }
};

struct SteadyState {
  RatVector values;                  // particular solution, free vars = 0
  std::vector<RatVector> nullspace;  // empty iff unique
  bool unique = false;
};

/// (Delta_gamma M)(k) = M(k + gamma) - M(k), exact.
Polynomial delta_poly(const Polynomial& m, const std::vector<int>& gamma);

/// d/dt E[S^u] = sum_j propensity_j(k) * Delta_{gamma_j}(k^u), as a
/// polynomial whose monomials are the moments on the right-hand side.
Polynomial moment_derivative(const PropensityNetwork& net, const MultiIndex& u);

/// Breadth-first fixed point of moment_derivative support; deterministic
/// discovery order (reaction index, then lexicographic monomial order).
ClosureResult closure(const PropensityNetwork& net,
                      const std::vector<MultiIndex>& targets,
                      std::size_t cap = 10000);

LinearMomentSystem assemble(const PropensityNetwork& net, const MomentBasis& basis);

/// Exact rational solution of A x + b = 0. Throws InconsistentError when
/// no solution exists.
SteadyState steady_state(const LinearMomentSystem& sys);

/// exp of the augmented matrix [[A, b], [0, 0]] in double precision.
std::vector<std::vector<double>> transient(const LinearMomentSystem& sys,
                                           const std::vector<double>& x0,
                                           const std::vector<double>& times);

}  // namespace crn
