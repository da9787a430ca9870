#pragma once

#include <vector>

#include "crn/rational.hpp"

namespace crn {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;  // row-major

std::size_t rat_rank(RatMatrix m);

/// Reduced row echelon form in place; returns pivot column per pivot row.
std::vector<std::size_t> rref(RatMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column (free variable = 1).
std::vector<RatVector> nullspace(const RatMatrix& m);

struct LinearSolution {
  bool consistent = false;
  RatVector particular;                // free variables set to 0
  std::vector<RatVector> nullspace;    // empty iff solution unique
  bool unique() const { return consistent && nullspace.empty(); }
};

/// Exact solution of m x = rhs by Gauss-Jordan elimination.
LinearSolution solve_linear(RatMatrix m, RatVector rhs);

/// Clears denominators and divides by the gcd; flips sign so the first
/// nonzero entry is positive.
std::vector<Integer> primitive_integer_vector(const RatVector& v);

}  // namespace crn
