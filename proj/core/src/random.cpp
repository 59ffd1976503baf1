#include "expnet/random.hpp"

#include <cmath>

#include "expnet/errors.hpp"

namespace expnet {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

CMatrix random_matrix(Rng& rng, std::size_t dim, MatrixKind kind, double stddev) {
  if (dim == 0) throw DimensionError("random_matrix: dim must be positive");
  CMatrix m(dim);
  for (auto& z : m.data()) {
    const double re = stddev * rng.normal();
    const double im = kind == MatrixKind::kComplexGaussian ? stddev * rng.normal() : 0.0;
    z = Complex(re, im);
  }
  return m;
}

CMatrix random_matrix(std::size_t dim, std::uint64_t seed, MatrixKind kind) {
  Rng rng(seed);
  return random_matrix(rng, dim, kind);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace expnet
