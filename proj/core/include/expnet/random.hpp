#pragma once

#include <cstdint>
#include <random>

#include "expnet/cmatrix.hpp"

namespace expnet {

enum class MatrixKind { kComplexGaussian, kRealGaussian };

// Reproducible standard-normal source.
//
// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard).
// Uniforms: the top 53 bits of one engine draw, mapped to [0, 1).
// Normals: Marsaglia polar method on u, v ~ U(-1, 1); each accepted pair
// yields two deviates that are handed out in order. std::normal_distribution
// is avoided because its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Entries filled row-major. Complex kind draws the real part then the
// imaginary part of each entry.
CMatrix random_matrix(Rng& rng, std::size_t dim, MatrixKind kind, double stddev = 1.0);

// Pure function of (dim, seed, kind).
CMatrix random_matrix(std::size_t dim, std::uint64_t seed, MatrixKind kind);

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace expnet
