#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expnet/cmatrix.hpp"
#include "expnet/exact_solver.hpp"

namespace expnet {

// Two-layer element-wise network experiment. Everything here lives over the
// reals; matrices are CMatrix values whose imaginary parts are zero.

enum class Activation { kRelu, kSigmoid, kIdentity };
enum class GradientMode { kAnalytic, kFiniteDifference };

std::string_view to_string(Activation act);
std::string_view to_string(GradientMode mode);
std::optional<Activation> parse_activation(std::string_view name);
std::optional<GradientMode> parse_gradient_mode(std::string_view name);

// Training runs plain full-batch gradient descent on the normalized score s,
// W1 <- W1 - lr * grad(numerator) / denominator. Normalizing makes one step
// size work across instances whose baseline residuals differ by orders of
// magnitude; with lr = 0.1 the median final s falls with dim (4 -> 8 -> 16)
// for both sigmoid and relu over lr in [0.05, 0.2].
inline constexpr double kDefaultLearningRate = 0.1;
double default_learning_rate(std::size_t dim);

// Throws ComplexInputError if any |imag| > 1e-12.
CMatrix apply_activation(const CMatrix& a, Activation act);
// Entry-wise derivative; relu'(0) = 0.
CMatrix activation_derivative(const CMatrix& a, Activation act);

struct RealInstance {
  CMatrix x1, x2, y1, y2;
};

// ||Y1 - Y2 X2^-1 X1||_F^2, the identity-activation residual.
double baseline_denominator(const RealInstance& inst);

// ||Y1 - Y2 s(W1 X2)^-1 s(W1 X1)||_F^2. ActivationSingularError when
// s(W1 X2) has rcond <= rcond_floor.
double two_layer_numerator(const CMatrix& w1, const RealInstance& inst, Activation act,
                           double rcond_floor = 1e-10);

// numerator / baseline_denominator. InvalidArgumentError if the denominator
// is zero (the identity network already interpolates both pairs).
double two_layer_s_score(const CMatrix& w1, const RealInstance& inst, Activation act,
                         double rcond_floor = 1e-10);

// d numerator / d W1 by the chain rule, using d(A^-1) = -A^-1 dA A^-1.
CMatrix two_layer_gradient(const CMatrix& w1, const RealInstance& inst, Activation act,
                           double rcond_floor = 1e-10);

// Central differences of the numerator, one entry at a time.
CMatrix two_layer_gradient_fd(const CMatrix& w1, const RealInstance& inst, Activation act,
                              double h = 1e-6, double rcond_floor = 1e-10);

struct ExperimentConfig {
  std::size_t dim = 8;
  std::vector<std::uint64_t> seeds{1};
  Activation activation = Activation::kSigmoid;
  std::size_t steps = 2000;
  // <= 0 selects default_learning_rate(dim).
  double learning_rate = 0.0;
  GradientMode gradient_mode = GradientMode::kAnalytic;
  double rcond_floor = 1e-6;
  // Run seeds on separate threads. Output does not depend on this.
  bool parallel = true;

  double effective_learning_rate() const;
  // Throws InvalidArgumentError.
  void validate() const;
};

struct SeedTrace {
  std::uint64_t seed = 0;
  // s after 0, 1, ..., steps updates.
  std::vector<double> s;
  double denominator = 0.0;
  // Instances and initial weights thrown away before training started.
  int resamples = 0;
  // Updates rejected because s(W1 X2) became singular (the step is halved).
  int singular_steps = 0;
  bool diverged = false;
};

struct ExperimentTrace {
  ExperimentConfig config;
  std::vector<SeedTrace> runs;  // ordered as config.seeds

  std::vector<double> initial_s() const;
  std::vector<double> final_s() const;
  int total_resamples() const;
  int diverged_count() const;
};

inline constexpr int kMaxResamples = 100;

// Samples one admitted real Gaussian instance plus W1 ~ N(0, 1/dim) for the
// seed, resampling on rejection (MaxResampleError after 100 in a row).
struct SeedSetup {
  RealInstance inst;
  CMatrix w1;
  double denominator = 0.0;
  int resamples = 0;
};
SeedSetup sample_seed_setup(std::size_t dim, std::uint64_t seed, Activation act,
                            double rcond_floor);

SeedTrace run_seed(const ExperimentConfig& cfg, std::uint64_t seed);
ExperimentTrace run_experiment(const ExperimentConfig& cfg);

double median(std::vector<double> values);

}  // namespace expnet
