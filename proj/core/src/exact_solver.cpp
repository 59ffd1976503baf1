#include "expnet/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "expnet/errors.hpp"
#include "expnet/linalg.hpp"

namespace expnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dims(const ProblemInstance& inst) {
  const std::size_t d = inst.x1.dim();
  if (inst.x2.dim() != d || inst.y1.dim() != d || inst.y2.dim() != d) {
    throw DimensionError("instance: X1, X2, Y1, Y2 must share one dimension");
  }
}

// Evaluates a residual, mapping kernel failures to +inf.
double guarded(const std::function<double()>& fn) {
  try {
    const double v = fn();
    return std::isnan(v) ? kInf : v;
  } catch (const NumericalError&) {
    return kInf;
  }
}

}  // namespace

double InstanceRconds::min() const { return std::min({x1, x2, y1, y2, x1_minus_x2}); }

bool ProblemInstance::admitted() const { return rconds.min() > admission_threshold; }

ProblemInstance make_instance(CMatrix x1, CMatrix x2, CMatrix y1, CMatrix y2,
                              double admission_threshold) {
  ProblemInstance inst{std::move(x1), std::move(x2), std::move(y1), std::move(y2), {},
                       admission_threshold};
  require_dims(inst);
  inst.rconds.x1 = rcond(inst.x1);
  inst.rconds.x2 = rcond(inst.x2);
  inst.rconds.y1 = rcond(inst.y1);
  inst.rconds.y2 = rcond(inst.y2);
  inst.rconds.x1_minus_x2 = rcond(inst.x1 - inst.x2);
  return inst;
}

SampledInstance sample_admitted_instance(std::size_t dim, std::uint64_t seed, MatrixKind kind,
                                         double admission_threshold) {
  Rng rng(seed);
  for (int attempt = 0; attempt <= 100; ++attempt) {
    CMatrix x1 = random_matrix(rng, dim, kind);
    CMatrix x2 = random_matrix(rng, dim, kind);
    CMatrix y1 = random_matrix(rng, dim, kind);
    CMatrix y2 = random_matrix(rng, dim, kind);
    ProblemInstance inst = make_instance(std::move(x1), std::move(x2), std::move(y1),
                                         std::move(y2), admission_threshold);
    if (inst.admitted()) return {std::move(inst), attempt};
  }
  throw MaxResampleError("sample_admitted_instance: 100 consecutive instances rejected");
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgumentError("alpha must be a positive real, got " + std::to_string(alpha));
  }
  if (std::abs(alpha - 1.0) < kMinAlphaGap) {
    throw InvalidArgumentError("alpha must differ from 1 by at least 1e-3, got " +
                               std::to_string(alpha));
  }
}

CMatrix solve_single_layer(const CMatrix& x, const CMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("solve_single_layer: dimension mismatch");
  const LuFactors lu = lu_factor(x);
  if (!(lu.rcond > kDefaultRcondFloor)) {
    throw NearSingularError("inverse: X is numerically singular", lu.rcond);
  }
  return lu_solve_right(lu, y);
}

std::pair<CMatrix, CMatrix> solve_block_diagonal(const ProblemInstance& inst) {
  require_dims(inst);
  return {solve_single_layer(inst.x1, inst.y1), solve_single_layer(inst.x2, inst.y2)};
}

CMatrix compute_z(const CMatrix& y1, const CMatrix& y2, double alpha, BranchSpec branch) {
  validate_alpha(alpha);
  if (y1.dim() != y2.dim()) throw DimensionError("compute_z: dimension mismatch");
  const LuFactors lu = lu_factor(y1);
  if (!(lu.rcond > kDefaultRcondFloor)) {
    throw NearSingularError("inverse: Y1 is numerically singular", lu.rcond);
  }
  return logm(alpha * lu_solve(lu, y2), branch);
}

ThreeLayerWeights solve_three_layer(const ProblemInstance& inst, double alpha,
                                    BranchSpec branch) {
  validate_alpha(alpha);
  require_dims(inst);
  if (!inst.admitted()) {
    const auto& r = inst.rconds;
    std::string which;
    auto note = [&](const char* name, double v) {
      if (!(v > inst.admission_threshold)) {
        which += (which.empty() ? "" : ", ") + std::string(name) + " (rcond " +
                 std::to_string(v) + ")";
      }
    };
    note("X1", r.x1);
    note("X2", r.x2);
    note("Y1", r.y1);
    note("Y2", r.y2);
    note("X1 - X2", r.x1_minus_x2);
    throw InstanceRejectedError("instance not admitted: near-singular " + which);
  }

  const std::size_t d = inst.dim();
  const double ln_alpha = std::log(alpha);
  ThreeLayerWeights w;
  w.alpha = alpha;
  w.w1 = ln_alpha * inverse(inst.x1 - inst.x2);
  w.z = compute_z(inst.y1, inst.y2, alpha, branch);
  w.w2 = (1.0 / (1.0 - alpha)) *
         ((w.z - CMatrix::scalar(d, ln_alpha)) * expm(-(w.w1 * inst.x2)));
  w.w3 = inst.y1 * expm(-(w.w2 * expm(w.w1 * inst.x1)));
  if (!w.w1.is_finite() || !w.w2.is_finite() || !w.w3.is_finite() || !w.z.is_finite()) {
    throw NumericalError("solve_three_layer: non-finite weights");
  }
  return w;
}

CMatrix eval_three_layer(const ThreeLayerWeights& w, const CMatrix& x) {
  if (x.dim() != w.w1.dim()) throw DimensionError("eval_three_layer: dimension mismatch");
  return w.w3 * expm(w.w2 * expm(w.w1 * x));
}

SolveReport verify(const ThreeLayerWeights& w, const ProblemInstance& inst, double tol) {
  require_dims(inst);
  if (w.w1.dim() != inst.dim()) throw DimensionError("verify: weights/instance dimension mismatch");

  SolveReport report;
  report.tol = tol;
  report.admitted = inst.admitted();
  report.residual1 = guarded(
      [&] { return relative_difference(eval_three_layer(w, inst.x1), inst.y1); });
  report.residual2 = guarded(
      [&] { return relative_difference(eval_three_layer(w, inst.x2), inst.y2); });

  const std::size_t d = inst.dim();
  const double ln_alpha = std::log(w.alpha);
  auto& checks = report.identity_checks;
  try {
    const CMatrix e1 = expm(w.w1 * inst.x1);
    const CMatrix e2 = expm(w.w1 * inst.x2);
    const CMatrix z_shift = w.z - CMatrix::scalar(d, ln_alpha);

    checks[identity::kScale] = frobenius_norm(e1 - w.alpha * e2) / frobenius_norm(e1);

    const CMatrix c = w.w2 * e1;
    const double cz = frobenius_norm(c) * frobenius_norm(w.z);
    const double comm = frobenius_norm(c * w.z - w.z * c);
    checks[identity::kCommutation] = cz > 0.0 ? comm / cz : comm;
    checks[identity::kCommutationClosedForm] = guarded([&] {
      const double nc = frobenius_norm(c);
      const double diff = frobenius_norm(c - (w.alpha / (1.0 - w.alpha)) * z_shift);
      return nc > 0.0 ? diff / nc : diff;
    });

    const CMatrix difference = e2 - e1;
    checks[identity::kExpDifference] =
        relative_difference(difference, (1.0 - w.alpha) * e2);
    checks[identity::kExpDifferenceRcond] = rcond(difference);

    checks[identity::kW3Consistency] = guarded([&] {
      return relative_difference(inst.y1 * expm(-(w.w2 * e1)), w.w3);
    });
  } catch (const NumericalError&) {
    for (const char* key : {identity::kScale, identity::kCommutation,
                            identity::kCommutationClosedForm, identity::kExpDifference,
                            identity::kW3Consistency}) {
      checks.try_emplace(key, kInf);
    }
    checks.try_emplace(identity::kExpDifferenceRcond, 0.0);
  }
  checks[identity::kZDefinition] = guarded([&] {
    const CMatrix ez = expm(w.z);
    const LuFactors lu = lu_factor(inst.y1);
    return frobenius_norm(ez - w.alpha * lu_solve(lu, inst.y2)) / frobenius_norm(ez);
  });

  report.pass = report.residual1 <= tol && report.residual2 <= tol;
  return report;
}

}  // namespace expnet
