#pragma once

#include <map>
#include <string>
#include <utility>

#include "expnet/cmatrix.hpp"
#include "expnet/matfun.hpp"
#include "expnet/random.hpp"

namespace expnet {

inline constexpr double kAdmissionRcond = 1e-3;
inline constexpr double kDefaultVerifyTol = 1e-6;
inline constexpr double kMinAlphaGap = 1e-3;

struct InstanceRconds {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  double x1_minus_x2 = 0.0;

  double min() const;
};

// Two data/label pairs for f(X_i) = Y_i.
struct ProblemInstance {
  CMatrix x1, x2, y1, y2;
  InstanceRconds rconds;
  double admission_threshold = kAdmissionRcond;

  std::size_t dim() const noexcept { return x1.dim(); }
  bool admitted() const;
};

// Computes the five rconds. Throws DimensionError if the dims disagree.
ProblemInstance make_instance(CMatrix x1, CMatrix x2, CMatrix y1, CMatrix y2,
                              double admission_threshold = kAdmissionRcond);

struct SampledInstance {
  ProblemInstance instance;
  int resamples = 0;
};

// Draws X1, X2, Y1, Y2 (in that order) from one Rng(seed) stream until the
// instance is admitted. MaxResampleError after 100 consecutive rejections.
SampledInstance sample_admitted_instance(std::size_t dim, std::uint64_t seed,
                                         MatrixKind kind = MatrixKind::kComplexGaussian,
                                         double admission_threshold = kAdmissionRcond);

// Weights of f(X) = W3 exp(W2 exp(W1 X)) together with alpha and Z.
struct ThreeLayerWeights {
  CMatrix w1, w2, w3;
  double alpha = 0.0;
  CMatrix z;
};

struct SolveReport {
  double residual1 = 0.0;
  double residual2 = 0.0;
  std::map<std::string, double> identity_checks;
  bool admitted = false;
  double tol = kDefaultVerifyTol;
  bool pass = false;
};

// Throws InvalidArgumentError unless alpha > 0 and |alpha - 1| >= 1e-3.
void validate_alpha(double alpha);

// W = Y X^-1.
CMatrix solve_single_layer(const CMatrix& x, const CMatrix& y);

// (Y1 X1^-1, Y2 X2^-1): the block-diagonal weight of the widened layer.
std::pair<CMatrix, CMatrix> solve_block_diagonal(const ProblemInstance& inst);

// Z = log(alpha Y1^-1 Y2) on the chosen branch.
CMatrix compute_z(const CMatrix& y1, const CMatrix& y2, double alpha,
                  BranchSpec branch = {});

// Closed-form three-layer interpolant:
//   W1 = ln(alpha) (X1 - X2)^-1
//   W2 = (Z - ln(alpha) I) exp(-W1 X2) / (1 - alpha)
//   W3 = Y1 exp(-W2 exp(W1 X1))
// Throws InstanceRejectedError when the instance is not admitted.
ThreeLayerWeights solve_three_layer(const ProblemInstance& inst, double alpha,
                                    BranchSpec branch = {});

// W3 exp(W2 exp(W1 X)).
CMatrix eval_three_layer(const ThreeLayerWeights& w, const CMatrix& x);

// Residuals of both pairs plus the internal identities the construction
// relies on. Never throws on numerical failure: a kernel that cannot be
// evaluated leaves an infinite residual in the report.
SolveReport verify(const ThreeLayerWeights& w, const ProblemInstance& inst,
                   double tol = kDefaultVerifyTol);

// Names of the entries of SolveReport::identity_checks.
namespace identity {
inline constexpr const char* kScale = "scale_identity";
inline constexpr const char* kCommutation = "commutation";
inline constexpr const char* kCommutationClosedForm = "commutation_closed_form";
inline constexpr const char* kExpDifference = "exp_difference";
inline constexpr const char* kExpDifferenceRcond = "exp_difference_rcond";
inline constexpr const char* kW3Consistency = "w3_consistency";
inline constexpr const char* kZDefinition = "z_definition";
}  // namespace identity

}  // namespace expnet
