#include "expnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "expnet/errors.hpp"
#include "expnet/linalg.hpp"
#include "expnet/random.hpp"

namespace expnet {

namespace {

constexpr double kRealTolerance = 1e-12;
constexpr int kMaxStepHalvings = 20;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double squared_frobenius(const CMatrix& a) {
  const double n = frobenius_norm(a);
  return n * n;
}

CMatrix map_real(const CMatrix& a, double (*fn)(double)) {
  CMatrix out(a.dim());
  auto src = a.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = fn(src[i].real());
  return out;
}

void require_real(const CMatrix& a, const char* what) {
  if (!a.is_real(kRealTolerance)) {
    throw ComplexInputError(std::string(what) + ": entries must be real");
  }
}

LuFactors factor_activation(const CMatrix& s2, double rcond_floor) {
  LuFactors lu = lu_factor(s2);
  if (!(lu.rcond > rcond_floor)) {
    throw ActivationSingularError("activation output s(W1 X2) is singular (rcond " +
                                      std::to_string(lu.rcond) + ")",
                                  lu.rcond);
  }
  return lu;
}

// Residual pieces shared by the score and the gradient.
struct Forward {
  CMatrix s1, s2, quotient, residual;
  LuFactors lu2;
};

Forward forward(const CMatrix& w1, const RealInstance& inst, Activation act,
                double rcond_floor) {
  require_real(w1, "W1");
  Forward f;
  f.s1 = apply_activation(w1 * inst.x1, act);
  f.s2 = apply_activation(w1 * inst.x2, act);
  f.lu2 = factor_activation(f.s2, rcond_floor);
  f.quotient = lu_solve(f.lu2, f.s1);
  f.residual = inst.y1 - inst.y2 * f.quotient;
  return f;
}

}  // namespace

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kIdentity:
      return "identity";
  }
  return "unknown";
}

std::string_view to_string(GradientMode mode) {
  return mode == GradientMode::kAnalytic ? "analytic" : "finite-difference";
}

std::optional<Activation> parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "identity") return Activation::kIdentity;
  return std::nullopt;
}

std::optional<GradientMode> parse_gradient_mode(std::string_view name) {
  if (name == "analytic") return GradientMode::kAnalytic;
  if (name == "finite-difference" || name == "fd") return GradientMode::kFiniteDifference;
  return std::nullopt;
}

double default_learning_rate(std::size_t /*dim*/) { return kDefaultLearningRate; }

CMatrix apply_activation(const CMatrix& a, Activation act) {
  require_real(a, "apply_activation");
  switch (act) {
    case Activation::kRelu:
      return map_real(a, [](double x) { return x > 0.0 ? x : 0.0; });
    case Activation::kSigmoid:
      return map_real(a, sigmoid);
    case Activation::kIdentity:
      return map_real(a, [](double x) { return x; });
  }
  return a;
}

CMatrix activation_derivative(const CMatrix& a, Activation act) {
  require_real(a, "activation_derivative");
  switch (act) {
    case Activation::kRelu:
      return map_real(a, [](double x) { return x > 0.0 ? 1.0 : 0.0; });
    case Activation::kSigmoid:
      return map_real(a, [](double x) {
        const double s = sigmoid(x);
        return s * (1.0 - s);
      });
    case Activation::kIdentity:
      return map_real(a, [](double) { return 1.0; });
  }
  return a;
}

double baseline_denominator(const RealInstance& inst) {
  const LuFactors lu = lu_factor(inst.x2);
  if (lu.singular()) throw NearSingularError("inverse: X2 is singular", 0.0);
  return squared_frobenius(inst.y1 - inst.y2 * lu_solve(lu, inst.x1));
}

double two_layer_numerator(const CMatrix& w1, const RealInstance& inst, Activation act,
                           double rcond_floor) {
  return squared_frobenius(forward(w1, inst, act, rcond_floor).residual);
}

double two_layer_s_score(const CMatrix& w1, const RealInstance& inst, Activation act,
                         double rcond_floor) {
  const double num = two_layer_numerator(w1, inst, act, rcond_floor);
  const double den = baseline_denominator(inst);
  if (!(den > 0.0)) {
    throw InvalidArgumentError(
        "s score: baseline residual is zero (Y1 = Y2 X2^-1 X1), instance is degenerate");
  }
  return num / den;
}

CMatrix two_layer_gradient(const CMatrix& w1, const RealInstance& inst, Activation act,
                           double rcond_floor) {
  const Forward f = forward(w1, inst, act, rcond_floor);
  const CMatrix g = 2.0 * f.residual;
  // M = Y2 s(W1 X2)^-1; the loss is ||Y1 - M s(W1 X1)||^2.
  const CMatrix mt_g = transpose(lu_solve_right(f.lu2, inst.y2)) * g;
  const CMatrix grad_s1 = -mt_g;
  const CMatrix grad_s2 = mt_g * transpose(f.quotient);
  return hadamard(grad_s2, activation_derivative(w1 * inst.x2, act)) * transpose(inst.x2) +
         hadamard(grad_s1, activation_derivative(w1 * inst.x1, act)) * transpose(inst.x1);
}

CMatrix two_layer_gradient_fd(const CMatrix& w1, const RealInstance& inst, Activation act,
                              double h, double rcond_floor) {
  const std::size_t n = w1.dim();
  CMatrix grad(n);
  CMatrix probe = w1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex orig = probe(i, j);
      probe(i, j) = orig + h;
      const double up = two_layer_numerator(probe, inst, act, rcond_floor);
      probe(i, j) = orig - h;
      const double down = two_layer_numerator(probe, inst, act, rcond_floor);
      probe(i, j) = orig;
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

double ExperimentConfig::effective_learning_rate() const {
  return learning_rate > 0.0 ? learning_rate : default_learning_rate(dim);
}

void ExperimentConfig::validate() const {
  if (dim == 0) throw InvalidArgumentError("experiment: dim must be positive");
  if (seeds.empty()) throw InvalidArgumentError("experiment: at least one seed is required");
  if (learning_rate < 0.0 || !std::isfinite(learning_rate)) {
    throw InvalidArgumentError("experiment: learning rate must be positive");
  }
  if (!(rcond_floor > 0.0)) throw InvalidArgumentError("experiment: rcond floor must be positive");
}

std::vector<double> ExperimentTrace::initial_s() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.s.front());
  return out;
}

std::vector<double> ExperimentTrace::final_s() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.s.back());
  return out;
}

int ExperimentTrace::total_resamples() const {
  int total = 0;
  for (const auto& r : runs) total += r.resamples;
  return total;
}

int ExperimentTrace::diverged_count() const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(),
                                        [](const SeedTrace& r) { return r.diverged; }));
}

SeedSetup sample_seed_setup(std::size_t dim, std::uint64_t seed, Activation act,
                            double rcond_floor) {
  Rng rng(seed);
  SeedSetup setup;
  const double w_scale = 1.0 / std::sqrt(static_cast<double>(dim));
  bool have_instance = false;
  int consecutive = 0;
  while (true) {
    if (consecutive > kMaxResamples) {
      throw MaxResampleError("experiment: " + std::to_string(kMaxResamples) +
                             " consecutive samples rejected for seed " + std::to_string(seed));
    }
    if (!have_instance) {
      RealInstance inst{random_matrix(rng, dim, MatrixKind::kRealGaussian),
                        random_matrix(rng, dim, MatrixKind::kRealGaussian),
                        random_matrix(rng, dim, MatrixKind::kRealGaussian),
                        random_matrix(rng, dim, MatrixKind::kRealGaussian)};
      const bool ok = rcond(inst.x1) > rcond_floor && rcond(inst.x2) > rcond_floor &&
                      rcond(inst.y1) > rcond_floor && rcond(inst.y2) > rcond_floor;
      const double den = ok ? baseline_denominator(inst) : 0.0;
      if (!ok || !(den > 0.0)) {
        ++setup.resamples;
        ++consecutive;
        continue;
      }
      setup.inst = std::move(inst);
      setup.denominator = den;
      have_instance = true;
    }
    CMatrix w1 = random_matrix(rng, dim, MatrixKind::kRealGaussian, w_scale);
    try {
      if (!(rcond(w1) > rcond_floor)) throw ActivationSingularError("W1 is singular", 0.0);
      two_layer_numerator(w1, setup.inst, act, rcond_floor);
    } catch (const ActivationSingularError&) {
      ++setup.resamples;
      ++consecutive;
      continue;
    }
    setup.w1 = std::move(w1);
    return setup;
  }
}

SeedTrace run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedSetup setup = sample_seed_setup(cfg.dim, seed, cfg.activation, cfg.rcond_floor);
  SeedTrace trace;
  trace.seed = seed;
  trace.resamples = setup.resamples;
  trace.denominator = setup.denominator;
  trace.s.reserve(cfg.steps + 1);

  const RealInstance& inst = setup.inst;
  CMatrix w1 = std::move(setup.w1);
  double lr = cfg.effective_learning_rate();
  double num = two_layer_numerator(w1, inst, cfg.activation, cfg.rcond_floor);
  trace.s.push_back(num / trace.denominator);

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    // Gradient of s = numerator / denominator; the denominator is W1-free.
    const CMatrix grad =
        (1.0 / trace.denominator) *
        (cfg.gradient_mode == GradientMode::kAnalytic
             ? two_layer_gradient(w1, inst, cfg.activation, cfg.rcond_floor)
             : two_layer_gradient_fd(w1, inst, cfg.activation, 1e-6, cfg.rcond_floor));
    for (int attempt = 0; attempt <= kMaxStepHalvings; ++attempt) {
      CMatrix candidate = w1 - lr * grad;
      try {
        const double next = two_layer_numerator(candidate, inst, cfg.activation,
                                                cfg.rcond_floor);
        if (!std::isfinite(next)) throw ActivationSingularError("non-finite loss", 0.0);
        w1 = std::move(candidate);
        num = next;
        break;
      } catch (const ActivationSingularError&) {
        ++trace.singular_steps;
        lr *= 0.5;
      }
    }
    trace.s.push_back(num / trace.denominator);
  }
  trace.diverged = trace.s.back() > 10.0 * trace.s.front();
  return trace;
}

ExperimentTrace run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentTrace trace;
  trace.config = cfg;
  trace.runs.reserve(cfg.seeds.size());
  if (cfg.parallel && cfg.seeds.size() > 1) {
    std::vector<std::future<SeedTrace>> pending;
    pending.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
      pending.push_back(std::async(std::launch::async, [&cfg, seed] { return run_seed(cfg, seed); }));
    }
    for (auto& f : pending) trace.runs.push_back(f.get());
  } else {
    for (std::uint64_t seed : cfg.seeds) trace.runs.push_back(run_seed(cfg, seed));
  }
  return trace;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgumentError("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace expnet
