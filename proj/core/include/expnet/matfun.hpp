#pragma once

#include <cstdint>

#include "expnet/cmatrix.hpp"
#include "expnet/linalg.hpp"

namespace expnet {

// Selects log(lambda) = ln|lambda| + i (arg(lambda) + 2 pi k), with the
// principal arg in (-pi, pi]. The same offset applies to every eigenvalue,
// so any k yields a genuine logarithm: logm(A, k) = logm(A, 0) + 2 pi i k I.
struct BranchSpec {
  std::int64_t offset = 0;
};

// Scalar logarithm on the chosen sheet. A negative real axis input (either
// sign of zero imaginary part) gets arg = +pi.
Complex branch_log(Complex z, BranchSpec branch = {});

// Inputs with ||A||_1 above this are rejected before any squaring.
inline constexpr double kExpmMaxOneNorm = 1e8;

// Scaling and squaring with diagonal Pade approximants of degree 3, 5, 7, 9
// or 13, selected by ||A||_1 against the standard backward-error thresholds.
CMatrix expm(const CMatrix& a);

struct LogmResult {
  CMatrix log;
  // Number of square roots taken before the series.
  int square_roots = 0;
  // Series terms used for log(I + K).
  int series_terms = 0;
  // Conditioning of the eigenvector basis of T (see eigenvector_condition).
  double kappa = 1.0;
};

// Principal (or branch-shifted) matrix logarithm.
//   1. Reject rcond(A) <= 1e-10 and zero Schur eigenvalues (SingularInputError).
//   2. A = Q T Q^H.
//   3. Take principal triangular square roots of T until ||T^(1/2^s) - I||_1
//      <= 0.25; IllConditionedError if a root pair r_ii + r_jj nearly cancels,
//      which happens when a cluster straddles the negative real axis.
//   4. log(I + K) by the Mercator series, stopped once a term drops below
//      1e-16 relative (or after dim terms when K is strictly upper).
//   5. Scale by 2^s, overwrite the diagonal with branch_log(t_ii) and map back.
LogmResult logm_detailed(const CMatrix& a, BranchSpec branch = {});
CMatrix logm(const CMatrix& a, BranchSpec branch = {});

// Reconstruction tolerance for logm: 1e-8 * ||A||_F * max(1, kappa).
double logm_tolerance(const CMatrix& a, double kappa);

// kappa = ||V||_F ||V^-1||_F / dim for the unit-diagonal eigenvector matrix V
// of the triangular factor. Returns +inf when two eigenvalues coincide to
// within 1e-12 relative (defective or derogatory spectrum).
double eigenvector_condition(const SchurForm& schur);

// log(lambda (I + K)) for an m x m Jordan block, K = upper shift / lambda,
// as (log lambda) I + K - K^2/2 + ... with exactly m - 1 series terms.
CMatrix jordan_block_log(Complex lambda, std::size_t m);

// ||e^A e^B - e^(A+B)||_F / ||e^(A+B)||_F.
double check_commuting_product(const CMatrix& a, const CMatrix& b);

}  // namespace expnet
