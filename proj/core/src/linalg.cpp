#include "expnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expnet/errors.hpp"

namespace expnet {

namespace {

enum class Op { kNone, kTranspose, kAdjoint };

Complex apply_op(Complex z, Op op) { return op == Op::kAdjoint ? std::conj(z) : z; }

// Solves op(A) x = b in place, with P A = L U stored in lu.
void solve_vector(const LuFactors& lu, Op op, std::vector<Complex>& x) {
  const std::size_t n = lu.dim();
  const CMatrix& f = lu.packed;
  if (op == Op::kNone) {
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[lu.pivots[i]];
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = y[i];
      for (std::size_t k = 0; k < i; ++k) s -= f(i, k) * y[k];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= f(ii, k) * y[k];
      y[ii] = s / f(ii, ii);
    }
    x = std::move(y);
    return;
  }
  // op(A) = op(U) op(L) P: solve op(U) w = b, op(L) v = w, then x = P^T v.
  std::vector<Complex> w(x);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = w[i];
    for (std::size_t k = 0; k < i; ++k) s -= apply_op(f(k, i), op) * w[k];
    w[i] = s / apply_op(f(i, i), op);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = w[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= apply_op(f(k, ii), op) * w[k];
    w[ii] = s;
  }
  for (std::size_t i = 0; i < n; ++i) x[lu.pivots[i]] = w[i];
}

double vector_one_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::abs(z);
  return s;
}

// Hager/Higham estimate of ||A^-1||_1 (the LAPACK xLACN2 iteration).
double estimate_inverse_one_norm(const LuFactors& lu) {
  const std::size_t n = lu.dim();
  const auto nd = static_cast<double>(n);
  std::vector<Complex> x(n, Complex(1.0 / nd, 0.0));
  solve_vector(lu, Op::kNone, x);
  if (n == 1) return std::abs(x[0]);
  double est = vector_one_norm(x);

  std::size_t last_j = n;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<Complex> xi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(x[i]);
      xi[i] = m > 0.0 ? x[i] / m : Complex(1.0, 0.0);
    }
    solve_vector(lu, Op::kAdjoint, xi);
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(xi[i]) > std::abs(xi[j])) j = i;
    if (j == last_j) break;
    last_j = j;

    std::vector<Complex> e(n);
    e[j] = 1.0;
    solve_vector(lu, Op::kNone, e);
    const double next = vector_one_norm(e);
    if (next <= est) break;
    est = next;
    x = std::move(e);
  }

  // Alternating-sign probe guards against the iteration's worst cases.
  std::vector<Complex> alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    alt[i] = sign * (1.0 + static_cast<double>(i) / (nd - 1.0));
  }
  solve_vector(lu, Op::kNone, alt);
  return std::max(est, 2.0 * vector_one_norm(alt) / (3.0 * nd));
}

}  // namespace

CMatrix LuFactors::lower() const {
  const std::size_t n = dim();
  CMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    l(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) l(i, j) = packed(i, j);
  }
  return l;
}

CMatrix LuFactors::upper() const {
  const std::size_t n = dim();
  CMatrix u(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(i, j) = packed(i, j);
  return u;
}

CMatrix LuFactors::permutation() const {
  const std::size_t n = dim();
  CMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) p(i, pivots[i]) = 1.0;
  return p;
}

LuFactors lu_factor(const CMatrix& a) {
  const std::size_t n = a.dim();
  LuFactors lu{a, std::vector<std::size_t>(n), 0.0};
  CMatrix& f = lu.packed;
  for (std::size_t i = 0; i < n; ++i) lu.pivots[i] = i;

  bool zero_pivot = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(f(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(f(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f(k, j), f(p, j));
      std::swap(lu.pivots[k], lu.pivots[p]);
    }
    if (best == 0.0) {
      zero_pivot = true;
      continue;
    }
    const Complex pivot = f(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex m = f(i, k) / pivot;
      f(i, k) = m;
      if (m == Complex(0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) f(i, j) -= m * f(k, j);
    }
  }

  if (zero_pivot) {
    lu.rcond = 0.0;
    return lu;
  }
  const double anorm = one_norm(a);
  const double inv_norm = estimate_inverse_one_norm(lu);
  if (!(anorm > 0.0) || !std::isfinite(inv_norm) || !(inv_norm > 0.0)) {
    lu.rcond = 0.0;
  } else {
    lu.rcond = std::clamp((1.0 / anorm) / inv_norm, 0.0, 1.0);
  }
  return lu;
}

CMatrix lu_solve(const LuFactors& lu, const CMatrix& b) {
  if (b.dim() != lu.dim()) throw DimensionError("lu_solve: dimension mismatch");
  if (lu.singular()) throw NearSingularError("lu_solve: matrix is singular", 0.0);
  const std::size_t n = lu.dim();
  CMatrix x(n);
  std::vector<Complex> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    solve_vector(lu, Op::kNone, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
  }
  return x;
}

CMatrix lu_solve_right(const LuFactors& lu, const CMatrix& b) {
  if (b.dim() != lu.dim()) throw DimensionError("lu_solve_right: dimension mismatch");
  if (lu.singular()) throw NearSingularError("lu_solve_right: matrix is singular", 0.0);
  // X A = B  <=>  A^T X^T = B^T; row i of X is the solution for row i of B.
  const std::size_t n = lu.dim();
  CMatrix x(n);
  std::vector<Complex> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = b(i, j);
    solve_vector(lu, Op::kTranspose, row);
    for (std::size_t j = 0; j < n; ++j) x(i, j) = row[j];
  }
  return x;
}

double rcond(const CMatrix& a) { return lu_factor(a).rcond; }

CMatrix inverse(const CMatrix& a, double rcond_floor) {
  const LuFactors lu = lu_factor(a);
  if (!(lu.rcond > rcond_floor)) {
    throw NearSingularError("inverse: rcond " + std::to_string(lu.rcond) +
                                " is not above floor " + std::to_string(rcond_floor),
                            lu.rcond);
  }
  return lu_solve(lu, CMatrix::identity(a.dim()));
}

}  // namespace expnet
