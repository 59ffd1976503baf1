#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace expnet {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Value type: copies are deep.
class CMatrix {
 public:
  CMatrix() = default;

  // dim x dim zero matrix. dim must be positive.
  explicit CMatrix(std::size_t dim);

  // Takes ownership of row-major entries; throws DimensionError if the size
  // is not dim*dim and InputError if any entry is NaN/Inf.
  CMatrix(std::size_t dim, std::vector<Complex> entries);

  // Nested-list construction for small literals, e.g. {{1, 2}, {3, 4}}.
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix zeros(std::size_t dim) { return CMatrix(dim); }
  static CMatrix diagonal(std::span<const Complex> diag);
  static CMatrix scalar(std::size_t dim, Complex value);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  bool is_finite() const noexcept;
  // True when every imaginary part has magnitude <= tol.
  bool is_real(double tol = 0.0) const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a);
CMatrix operator*(CMatrix a, Complex s);
CMatrix operator*(Complex s, CMatrix a);
// Matrix product; same as matmul().
CMatrix operator*(const CMatrix& a, const CMatrix& b);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
// Entry-wise (Hadamard) product.
CMatrix hadamard(const CMatrix& a, const CMatrix& b);
Complex trace(const CMatrix& a);

double frobenius_norm(const CMatrix& a);
// Max column sum of absolute values.
double one_norm(const CMatrix& a);
double max_abs(const CMatrix& a);

// ||a - b||_F / ||b||_F, or the absolute difference when b is zero.
double relative_difference(const CMatrix& a, const CMatrix& b);

}  // namespace expnet
