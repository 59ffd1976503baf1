#include "expnet/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expnet/errors.hpp"

namespace expnet {

namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw DimensionError("CMatrix: dim must be positive");
}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw DimensionError("CMatrix: dim must be positive");
  if (data_.size() != dim * dim) {
    throw DimensionError("CMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                         std::to_string(data_.size()));
  }
  if (!is_finite()) throw InputError("CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw DimensionError("CMatrix: empty literal");
  dim_ = n;
  data_.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("CMatrix: literal is not square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!is_finite()) throw InputError("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t dim) { return scalar(dim, 1.0); }

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::scalar(std::size_t dim, Complex value) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = value;
  return m;
}

bool CMatrix::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool CMatrix::is_real(double tol) const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [tol](const Complex& z) { return std::abs(z.imag()) <= tol; });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  CMatrix c(n);
  // i-k-j order; each c(i, j) accumulates over k in increasing order.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix adjoint(const CMatrix& a) {
  const std::size_t n = a.dim();
  CMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

CMatrix transpose(const CMatrix& a) {
  const std::size_t n = a.dim();
  CMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(j, i) = a(i, j);
  return r;
}

CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "hadamard");
  CMatrix r(a.dim());
  auto out = r.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  return r;
}

Complex trace(const CMatrix& a) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

double frobenius_norm(const CMatrix& a) {
  // Scaled sum of squares so huge exponentials do not overflow the norm.
  double scale = 0.0;
  double ssq = 1.0;
  for (const auto& z : a.data()) {
    for (double v : {z.real(), z.imag()}) {
      if (v == 0.0) continue;
      const double av = std::abs(v);
      if (scale < av) {
        ssq = 1.0 + ssq * (scale / av) * (scale / av);
        scale = av;
      } else {
        ssq += (av / scale) * (av / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

double one_norm(const CMatrix& a) {
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double relative_difference(const CMatrix& a, const CMatrix& b) {
  const double diff = frobenius_norm(a - b);
  const double ref = frobenius_norm(b);
  return ref > 0.0 ? diff / ref : diff;
}

}  // namespace expnet
