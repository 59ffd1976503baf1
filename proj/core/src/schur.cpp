#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "expnet/errors.hpp"
#include "expnet/linalg.hpp"

namespace expnet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Unitary G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s = 0.0;

  static Givens zeroing(Complex a, Complex b) {
    if (b == Complex(0.0)) return {};
    const double na = std::abs(a);
    const double nb = std::abs(b);
    if (na == 0.0) return {0.0, std::conj(b) / nb};
    const double norm = std::hypot(na, nb);
    return {na / norm, (a / na) * std::conj(b) / norm};
  }

  // Rows p, q of m, columns [col_begin, n).
  void apply_left(CMatrix& m, std::size_t p, std::size_t q, std::size_t col_begin) const {
    for (std::size_t j = col_begin; j < m.dim(); ++j) {
      const Complex x = m(p, j);
      const Complex y = m(q, j);
      m(p, j) = c * x + s * y;
      m(q, j) = -std::conj(s) * x + c * y;
    }
  }

  // Columns p, q of m times G^H, rows [0, row_end).
  void apply_right_adjoint(CMatrix& m, std::size_t p, std::size_t q, std::size_t row_end) const {
    for (std::size_t i = 0; i < row_end; ++i) {
      const Complex x = m(i, p);
      const Complex y = m(i, q);
      m(i, p) = x * c + y * std::conj(s);
      m(i, q) = -x * s + y * c;
    }
  }
};

// Householder reduction A = Q H Q^H with H upper Hessenberg.
void reduce_to_hessenberg(CMatrix& h, CMatrix& q) {
  const std::size_t n = h.dim();
  if (n < 3) return;
  std::vector<Complex> u(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;

    // u = x + e^{i arg x0} ||x|| e1; P = I - 2 u u^H / (u^H u) is Hermitian.
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(std::norm(x0) + tail);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    std::fill(u.begin(), u.end(), Complex(0.0));
    u[k + 1] = x0 + phase * xnorm;
    for (std::size_t i = k + 2; i < n; ++i) u[i] = h(i, k);
    double unorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) unorm2 += std::norm(u[i]);
    const double beta = 2.0 / unorm2;

    // H := P H
    for (std::size_t j = 0; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(u[i]) * h(i, j);
      dot *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= u[i] * dot;
    }
    // H := H P and Q := Q P
    for (CMatrix* m : {&h, &q}) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex dot = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) dot += (*m)(i, j) * u[j];
        dot *= beta;
        for (std::size_t j = k + 1; j < n; ++j) (*m)(i, j) -= dot * std::conj(u[j]);
      }
    }
    h(k + 1, k) = -phase * xnorm;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalue of the trailing 2x2 block of the active window closest to its
// last diagonal entry.
Complex wilkinson_shift(const CMatrix& t, std::size_t iu) {
  Complex a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
  const double scale = abs1(a) + abs1(b) + abs1(c) + abs1(d);
  if (scale == 0.0) return 0.0;
  a /= scale;
  b /= scale;
  c /= scale;
  d /= scale;
  const Complex bc = b * c;
  const Complex diff = a - d;
  const Complex disc = std::sqrt(diff * diff + 4.0 * bc);
  const Complex det = a * d - bc;
  const Complex tr = a + d;
  Complex e1 = (tr + disc) / 2.0;
  Complex e2 = (tr - disc) / 2.0;
  // Recover the smaller root from the determinant to avoid cancellation.
  if (abs1(e1) > abs1(e2)) {
    e2 = det / e1;
  } else if (abs1(e2) > 0.0) {
    e1 = det / e2;
  }
  return scale * (abs1(e1 - d) < abs1(e2 - d) ? e1 : e2);
}

}  // namespace

SchurForm schur_decompose(const CMatrix& a) {
  if (!a.is_finite()) throw InputError("schur_decompose: non-finite input");
  const std::size_t n = a.dim();
  SchurForm out{CMatrix::identity(n), a, {}};
  CMatrix& t = out.t;
  CMatrix& q = out.q;

  reduce_to_hessenberg(t, q);

  const std::size_t max_sweeps = 30 * n;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::size_t iu = n - 1;
  while (iu > 0) {
    // Zero negligible subdiagonals and find the start of the active block.
    std::size_t il = iu;
    while (il > 0) {
      const double sd = abs1(t(il, il - 1));
      const double dd = abs1(t(il - 1, il - 1)) + abs1(t(il, il));
      if (sd <= kEps * dd || sd <= std::numeric_limits<double>::min()) {
        t(il, il - 1) = 0.0;
        break;
      }
      --il;
    }
    if (il == iu) {
      --iu;
      since_deflation = 0;
      continue;
    }
    if (++total > max_sweeps) {
      throw ConvergenceError("schur_decompose: no convergence after " +
                             std::to_string(max_sweeps) + " QR sweeps");
    }
    ++since_deflation;

    Complex shift;
    if (since_deflation == 10 || since_deflation == 30) {
      shift = std::abs(t(iu, iu - 1).real());
      if (iu >= 2) shift += std::abs(t(iu - 1, iu - 2).real());
    } else {
      shift = wilkinson_shift(t, iu);
    }

    Givens g = Givens::zeroing(t(il, il) - shift, t(il + 1, il));
    g.apply_left(t, il, il + 1, il);
    g.apply_right_adjoint(t, il, il + 1, std::min(il + 2, iu) + 1);
    g.apply_right_adjoint(q, il, il + 1, n);

    for (std::size_t i = il + 1; i < iu; ++i) {
      g = Givens::zeroing(t(i, i - 1), t(i + 1, i - 1));
      g.apply_left(t, i, i + 1, i - 1);
      t(i + 1, i - 1) = 0.0;
      g.apply_right_adjoint(t, i, i + 1, std::min(i + 2, iu) + 1);
      g.apply_right_adjoint(q, i, i + 1, n);
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) t(i, j) = 0.0;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = t(i, i);
  return out;
}

}  // namespace expnet
