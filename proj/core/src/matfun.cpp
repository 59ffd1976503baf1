#include "expnet/matfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "expnet/errors.hpp"

namespace expnet {

namespace {

// Backward-error thresholds on ||A||_1 for the diagonal Pade approximants of
// degree 3, 5, 7, 9, 13 (Higham, SIAM J. Matrix Anal. Appl. 26(4), 2005).
constexpr std::array<double, 4> kPadeTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                           9.504178996162932e-1, 2.097847961257068e0};
constexpr double kPadeTheta13 = 5.371920351148152e0;

constexpr double kLogSeriesRadius = 0.25;
constexpr int kMaxSquareRoots = 64;
constexpr int kMaxSeriesTerms = 200;

CMatrix identity_like(const CMatrix& a) { return CMatrix::identity(a.dim()); }

// Fills U (odd part) and V (even part) of the degree-m Pade numerator; the
// approximant is (V - U)^-1 (V + U).
void pade_terms(const CMatrix& a, int degree, CMatrix& u, CMatrix& v) {
  const CMatrix id = identity_like(a);
  const CMatrix a2 = a * a;
  switch (degree) {
    case 3: {
      constexpr double b[] = {120.0, 60.0, 12.0, 1.0};
      u = a * (b[3] * a2 + b[1] * id);
      v = b[2] * a2 + b[0] * id;
      return;
    }
    case 5: {
      constexpr double b[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
      const CMatrix a4 = a2 * a2;
      u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 7: {
      constexpr double b[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                              25200.0,    1512.0,    56.0,      1.0};
      const CMatrix a4 = a2 * a2;
      const CMatrix a6 = a4 * a2;
      u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    case 9: {
      constexpr double b[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                              30270240.0,    2162160.0,    110880.0,     3960.0,
                              90.0,          1.0};
      const CMatrix a4 = a2 * a2;
      const CMatrix a6 = a4 * a2;
      const CMatrix a8 = a6 * a2;
      u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
      v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
      return;
    }
    default: {
      constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};
      const CMatrix a4 = a2 * a2;
      const CMatrix a6 = a4 * a2;
      u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
               b[3] * a2 + b[1] * id);
      v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
          b[0] * id;
      return;
    }
  }
}

// Principal square root of an upper triangular matrix (column-wise
// recurrence). Off-diagonal entries divide by r_ii + r_jj.
CMatrix sqrt_upper_triangular(const CMatrix& t) {
  const std::size_t n = t.dim();
  CMatrix r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r(j, j) = std::sqrt(t(j, j));
    for (std::size_t ii = j; ii-- > 0;) {
      Complex s = t(ii, j);
      for (std::size_t k = ii + 1; k < j; ++k) s -= r(ii, k) * r(k, j);
      const Complex denom = r(ii, ii) + r(j, j);
      if (s == Complex(0.0)) continue;
      const double scale = std::abs(r(ii, ii)) + std::abs(r(j, j));
      if (std::abs(denom) <= 1e-12 * scale) {
        throw IllConditionedError(
            "logm: eigenvalues " + std::to_string(ii) + " and " + std::to_string(j) +
            " straddle the branch cut; the principal logarithm is ill-conditioned");
      }
      r(ii, j) = s / denom;
    }
  }
  return r;
}

bool strictly_upper(const CMatrix& k) {
  for (std::size_t i = 0; i < k.dim(); ++i)
    if (k(i, i) != Complex(0.0)) return false;
  return true;
}

}  // namespace

Complex branch_log(Complex z, BranchSpec branch) {
  if (z == Complex(0.0)) throw SingularInputError("log: zero argument is singular");
  double arg = std::arg(z);
  if (z.imag() == 0.0 && z.real() < 0.0) arg = std::numbers::pi;
  arg += 2.0 * std::numbers::pi * static_cast<double>(branch.offset);
  return {std::log(std::abs(z)), arg};
}

CMatrix expm(const CMatrix& a) {
  if (!a.is_finite()) throw InputError("expm: non-finite input");
  const double norm = one_norm(a);
  if (norm > kExpmMaxOneNorm) {
    throw OverflowError("expm: ||A||_1 = " + std::to_string(norm) + " exceeds " +
                        std::to_string(kExpmMaxOneNorm));
  }

  int degree = 13;
  int squarings = 0;
  constexpr std::array<int, 4> kDegrees{3, 5, 7, 9};
  bool small = false;
  for (std::size_t i = 0; i < kPadeTheta.size(); ++i) {
    if (norm <= kPadeTheta[i]) {
      degree = kDegrees[i];
      small = true;
      break;
    }
  }
  CMatrix scaled = a;
  if (!small && norm > kPadeTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kPadeTheta13)));
    scaled *= std::ldexp(1.0, -squarings);
  }

  CMatrix u, v;
  pade_terms(scaled, degree, u, v);
  const LuFactors denom = lu_factor(v - u);
  if (denom.singular()) throw NumericalError("expm: singular Pade denominator");
  CMatrix r = lu_solve(denom, v + u);
  for (int i = 0; i < squarings; ++i) {
    r = r * r;
    if (!r.is_finite()) throw OverflowError("expm: result overflowed during squaring");
  }
  if (!r.is_finite()) throw OverflowError("expm: non-finite result");
  return r;
}

double eigenvector_condition(const SchurForm& schur) {
  const CMatrix& t = schur.t;
  const std::size_t n = t.dim();
  CMatrix v = CMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex lambda = t(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      const Complex gap = t(ii, ii) - lambda;
      if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(lambda))) {
        return std::numeric_limits<double>::infinity();
      }
      Complex s = 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s += t(ii, k) * v(k, j);
      v(ii, j) = -s / gap;
    }
  }
  // V is unit upper triangular; invert by back substitution.
  CMatrix vinv = CMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t ii = j; ii-- > 0;) {
      Complex s = 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s += v(ii, k) * vinv(k, j);
      vinv(ii, j) = -s;
    }
  }
  const double kappa = frobenius_norm(v) * frobenius_norm(vinv) / static_cast<double>(n);
  return std::isfinite(kappa) ? kappa : std::numeric_limits<double>::infinity();
}

double logm_tolerance(const CMatrix& a, double kappa) {
  return 1e-8 * frobenius_norm(a) * std::max(1.0, kappa);
}

LogmResult logm_detailed(const CMatrix& a, BranchSpec branch) {
  if (!a.is_finite()) throw InputError("logm: non-finite input");
  const double rc = rcond(a);
  if (!(rc > kDefaultRcondFloor)) {
    throw SingularInputError("logm: matrix is singular (rcond " + std::to_string(rc) + ")");
  }
  const std::size_t n = a.dim();
  SchurForm schur = schur_decompose(a);
  CMatrix& t = schur.t;
  const double tnorm = frobenius_norm(t);
  for (std::size_t i = 0; i < n; ++i) {
    Complex& d = t(i, i);
    if (d.imag() == 0.0) d = Complex(d.real(), 0.0);  // -0 -> +0: keep arg = +pi
    if (std::abs(d) <= 1e-14 * tnorm) {
      throw SingularInputError("logm: zero eigenvalue, matrix is singular");
    }
  }

  LogmResult out;
  out.kappa = eigenvector_condition(schur);

  const CMatrix id = CMatrix::identity(n);
  CMatrix root = t;
  while (one_norm(root - id) > kLogSeriesRadius) {
    if (out.square_roots == kMaxSquareRoots) {
      throw ConvergenceError("logm: square roots did not approach the identity");
    }
    root = sqrt_upper_triangular(root);
    ++out.square_roots;
  }

  // Mercator series: log(I + K) = K - K^2/2 + K^3/3 - ...
  const CMatrix k = root - id;
  const int max_terms = strictly_upper(k) ? static_cast<int>(n) - 1 : kMaxSeriesTerms;
  CMatrix sum(n);
  CMatrix power = k;
  for (int j = 1; j <= max_terms; ++j) {
    const double coeff = ((j % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(j);
    const CMatrix term = coeff * power;
    sum += term;
    ++out.series_terms;
    if (one_norm(term) <= 1e-16 * one_norm(sum)) break;
    if (j < max_terms) power = power * k;
  }

  sum *= std::ldexp(1.0, out.square_roots);
  for (std::size_t i = 0; i < n; ++i) sum(i, i) = branch_log(t(i, i), branch);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) sum(i, j) = 0.0;

  out.log = schur.q * sum * adjoint(schur.q);
  return out;
}

CMatrix logm(const CMatrix& a, BranchSpec branch) { return logm_detailed(a, branch).log; }

CMatrix jordan_block_log(Complex lambda, std::size_t m) {
  if (m == 0) throw DimensionError("jordan_block_log: block size must be positive");
  if (lambda == Complex(0.0)) {
    throw SingularInputError("jordan_block_log: lambda = 0 is singular");
  }
  CMatrix k(m);
  for (std::size_t i = 0; i + 1 < m; ++i) k(i, i + 1) = 1.0 / lambda;

  CMatrix result = CMatrix::scalar(m, branch_log(lambda));
  CMatrix power = k;
  for (std::size_t j = 1; j < m; ++j) {
    const double coeff = ((j % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(j);
    result += coeff * power;
    power = power * k;
  }
  return result;
}

double check_commuting_product(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("check_commuting_product: dimension mismatch");
  const CMatrix joint = expm(a + b);
  return relative_difference(expm(a) * expm(b), joint);
}

}  // namespace expnet
