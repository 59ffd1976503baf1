#pragma once

#include <cstddef>
#include <vector>

#include "expnet/cmatrix.hpp"

namespace expnet {

// Floor used by plumbing inverses (W = Y X^-1 and friends).
inline constexpr double kDefaultRcondFloor = 1e-10;

// Partial-pivoted LU, L and U packed into one matrix (unit lower diagonal
// implied). Row i of P*A is row pivots[i] of A.
struct LuFactors {
  CMatrix packed;
  std::vector<std::size_t> pivots;
  // Reciprocal 1-norm condition estimate in [0, 1]; 0 iff a zero pivot was hit.
  double rcond = 0.0;

  std::size_t dim() const noexcept { return packed.dim(); }
  bool singular() const noexcept { return rcond == 0.0; }
  CMatrix lower() const;
  CMatrix upper() const;
  // P such that P*A = L*U.
  CMatrix permutation() const;
};

// Never throws for finite square input; singularity is reported via rcond.
LuFactors lu_factor(const CMatrix& a);

// Solves A X = B using precomputed factors. Throws NearSingularError when
// the factorization hit a zero pivot.
CMatrix lu_solve(const LuFactors& lu, const CMatrix& b);

// Solves X A = B, i.e. returns B A^-1.
CMatrix lu_solve_right(const LuFactors& lu, const CMatrix& b);

double rcond(const CMatrix& a);

// Throws NearSingularError when lu_factor(a).rcond <= rcond_floor.
CMatrix inverse(const CMatrix& a, double rcond_floor = kDefaultRcondFloor);

// A = Q T Q^H with Q unitary and T upper triangular.
struct SchurForm {
  CMatrix q;
  CMatrix t;
  std::vector<Complex> eigenvalues;  // diag(T), in order
};

// Householder reduction to Hessenberg form followed by single-shift complex
// QR. Throws ConvergenceError after 30*dim QR sweeps without full deflation.
SchurForm schur_decompose(const CMatrix& a);

}  // namespace expnet
