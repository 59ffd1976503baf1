// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "expnet/errors.hpp"
#include "expnet/exact_solver.hpp"
#include "expnet/experiment.hpp"
#include "expnet/matfun.hpp"
#include "oracles.hpp"

using namespace expnet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<std::size_t> kDims{2, 4, 8, 16};
constexpr int kInstancesPerDim = 100;

struct Battery {
  std::vector<ProblemInstance> instances;
};

Battery make_battery() {
  Battery b;
  for (std::size_t d : kDims) {
    for (int k = 0; k < kInstancesPerDim; ++k) {
      b.instances.push_back(sample_admitted_instance(d, mix_seed(d, k)).instance);
    }
  }
  return b;
}

struct SolveOutcome {
  SolveReport report;
  bool solved = false;
};

SolveOutcome solve_and_verify(const ProblemInstance& inst, double alpha) {
  SolveOutcome o;
  try {
    o.report = verify(solve_three_layer(inst, alpha), inst);
    o.solved = true;
  } catch (const Error&) {
  }
  return o;
}

void criteria_1_to_3(const Battery& battery) {
  const auto t0 = Clock::now();
  std::vector<double> residuals;
  std::vector<SolveOutcome> outcomes;
  int within = 0;
  for (const auto& inst : battery.instances) {
    SolveOutcome o = solve_and_verify(inst, std::numbers::e);
    const double r1 = o.solved ? o.report.residual1 : INFINITY;
    const double r2 = o.solved ? o.report.residual2 : INFINITY;
    residuals.push_back(r1);
    residuals.push_back(r2);
    if (r1 <= 1e-6 && r2 <= 1e-6) ++within;
    outcomes.push_back(std::move(o));
  }
  const double elapsed = seconds_since(t0);
  const double n = static_cast<double>(battery.instances.size());
  const double med = median(residuals);
  const double worst = *std::max_element(residuals.begin(), residuals.end());
  report(1, within >= 0.99 * n && med <= 1e-8 && elapsed <= 30.0,
         fmt("%d/%d instances (d in 2,4,8,16) with both residuals <= 1e-6 (need >= 99%%); "
             "median %.3g (need <= 1e-8); max %.3g; %.2f s (need <= 30 s)",
             within, static_cast<int>(n), med, worst, elapsed));

  int alpha_pass = 0;
  std::string alpha_detail;
  for (double alpha : {0.5, 2.0, std::numbers::e}) {
    int passed = 0;
    for (const auto& inst : battery.instances) {
      const SolveOutcome o = solve_and_verify(inst, alpha);
      if (o.solved && o.report.pass) ++passed;
    }
    if (passed == static_cast<int>(n)) ++alpha_pass;
    alpha_detail += fmt("alpha=%.4g: %d/%d pass; ", alpha, passed, static_cast<int>(n));
  }
  report(2, alpha_pass == 3, alpha_detail + "all instances must pass at tol 1e-6");

  const char* keys[] = {identity::kScale, identity::kCommutation, identity::kCommutationClosedForm,
                        identity::kExpDifference, identity::kW3Consistency,
                        identity::kZDefinition};
  double worst_identity = 0.0;
  std::string worst_key = "-";
  bool rcond_positive = true;
  for (const auto& o : outcomes) {
    if (!o.solved) {
      worst_identity = INFINITY;
      continue;
    }
    for (const char* key : keys) {
      const auto it = o.report.identity_checks.find(key);
      const double v = it == o.report.identity_checks.end() ? INFINITY : it->second;
      if (!(v <= worst_identity)) {
        worst_identity = v;
        worst_key = key;
      }
    }
    const auto it = o.report.identity_checks.find(identity::kExpDifferenceRcond);
    rcond_positive &= it != o.report.identity_checks.end() && it->second > 0.0;
  }
  report(3, worst_identity <= 1e-7 && rcond_positive,
         fmt("worst identity residual %.3g (%s), need <= 1e-7; exp-difference rcond > 0: %s",
             worst_identity, worst_key.c_str(), rcond_positive ? "yes" : "no"));
}

CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  const Eigen::MatrixXcd a = oracle::to_eigen(random_matrix(n, seed, MatrixKind::kComplexGaussian));
  return oracle::from_eigen(Eigen::MatrixXcd(a.householderQr().householderQ()));
}

void criterion_4() {
  double taylor = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 8;
    CMatrix a = random_matrix(n, mix_seed(seed, 41), MatrixKind::kComplexGaussian);
    a *= Complex((0.05 + 0.95 * static_cast<double>(seed) / 99.0) / frobenius_norm(a));
    taylor = std::max(taylor, relative_difference(expm(a), oracle::taylor_expm(a, 30)));
  }

  double roundtrip = 0.0;
  int roundtrip_count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 15;
    const CMatrix a = random_matrix(n, mix_seed(seed, 42), MatrixKind::kComplexGaussian);
    if (rcond(a) <= kAdmissionRcond) continue;
    ++roundtrip_count;
    try {
      roundtrip = std::max(roundtrip, relative_difference(expm(logm(a)), a));
    } catch (const Error&) {
      roundtrip = INFINITY;
    }
  }

  double jordan = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(seed, 43));
    std::vector<std::pair<Complex, std::size_t>> blocks;
    std::size_t n = 0;
    const std::size_t count = 1 + seed % 3;
    for (std::size_t b = 0; b < count; ++b) {
      const double r = 0.5 + 2.5 * rng.uniform();
      const double theta = (2.0 * rng.uniform() - 1.0) * 0.9 * std::numbers::pi;
      const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
      blocks.emplace_back(std::polar(r, theta), m);
      n += m;
    }
    std::vector<CMatrix> logs;
    for (const auto& [lambda, m] : blocks) logs.push_back(jordan_block_log(lambda, m));
    const CMatrix u = random_unitary(n, mix_seed(seed, 44));
    const CMatrix a = u * oracle::jordan_matrix(blocks) * adjoint(u);
    const CMatrix want = u * oracle::block_diagonal(logs) * adjoint(u);
    try {
      jordan = std::max(jordan, relative_difference(logm(a), want));
    } catch (const Error&) {
      jordan = INFINITY;
    }
  }

  double commuting = 0.0;
  double det_trace = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + seed % 8;
    CMatrix a = random_matrix(n, mix_seed(seed, 45), MatrixKind::kComplexGaussian);
    a *= Complex(1.0 / frobenius_norm(a));
    const CMatrix b = a * a * Complex(0.5, 0.25) - a * Complex(2.0) + CMatrix::scalar(n, 0.3);
    commuting = std::max(commuting, check_commuting_product(a, b));
    commuting = std::max(commuting, check_commuting_product(a, a * Complex(-1.5)));

    const CMatrix c = random_matrix(n, mix_seed(seed, 46), MatrixKind::kComplexGaussian);
    const Complex det = oracle::to_eigen(expm(c)).determinant();
    const Complex et = std::exp(trace(c));
    det_trace = std::max(det_trace, std::abs(det - et) / std::abs(et));
  }

  report(4,
         taylor <= 1e-12 && roundtrip <= 1e-8 && jordan <= 1e-7 && commuting <= 1e-9 &&
             det_trace <= 1e-9,
         fmt("expm vs Taylor %.3g (<= 1e-12); expm(logm) roundtrip %.3g over %d matrices "
             "(<= 1e-8); logm vs Jordan-block log %.3g (<= 1e-7); commuting product %.3g "
             "(<= 1e-9); det(expm A) vs exp(tr A) %.3g (<= 1e-9)",
             taylor, roundtrip, roundtrip_count, jordan, commuting, det_trace));
}

void criterion_5() {
  const double ln2 = std::log(2.0);
  double err = 0.0;
  try {
    const ProblemInstance inst =
        make_instance(CMatrix{{2.0}}, CMatrix{{1.0}}, CMatrix{{3.0}}, CMatrix{{6.0}});
    const ThreeLayerWeights w = solve_three_layer(inst, 2.0);
    err = std::max({std::abs(w.w1(0, 0) - ln2), std::abs(w.w2(0, 0) + ln2 / 2.0),
                    std::abs(w.w3(0, 0) - 12.0),
                    std::abs(eval_three_layer(w, CMatrix{{2.0}})(0, 0) - 3.0),
                    std::abs(eval_three_layer(w, CMatrix{{1.0}})(0, 0) - 6.0)});
  } catch (const Error& e) {
    err = INFINITY;
  }
  report(5, err <= 1e-12,
         fmt("d=1 (X1=2, X2=1, Y1=3, Y2=6, alpha=2): max abs error in W1, W2, W3, f(2), f(1) "
             "= %.3g (<= 1e-12)",
             err));
}

ExperimentTrace run(std::size_t dim, Activation act) {
  ExperimentConfig cfg;
  cfg.dim = dim;
  cfg.activation = act;
  cfg.steps = 2000;
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  return run_experiment(cfg);
}

void criterion_6() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (Activation act : {Activation::kSigmoid, Activation::kRelu}) {
    const ExperimentTrace t8 = run(8, act);
    const double init8 = median(t8.initial_s());
    const double fin8 = median(t8.final_s());
    const double fin4 = median(run(4, act).final_s());
    const double fin16 = median(run(16, act).final_s());
    const bool act_ok = fin8 < 0.5 && fin8 < init8 && fin16 <= fin4;
    ok &= act_ok;
    detail += fmt("%s: d=8 median s %.3g -> %.3g, median final d=4/8/16 = %.3g/%.3g/%.3g; ",
                  std::string(to_string(act)).c_str(), init8, fin8, fin4, fin8, fin16);
  }
  double identity_dev = 0.0;
  for (const auto& r : run(8, Activation::kIdentity).runs)
    for (double s : r.s) identity_dev = std::max(identity_dev, std::abs(s - 1.0));
  const double elapsed = seconds_since(t0);
  ok &= identity_dev <= 1e-10 && elapsed <= 300.0;
  detail += fmt("identity max |s-1| %.3g (<= 1e-10); %.1f s (<= 300 s)", identity_dev, elapsed);
  report(6, ok, detail);
}

// Central differences of the numerator, written independently of the library's FD helper.
CMatrix central_differences(const std::function<double(const CMatrix&)>& f, const CMatrix& w,
                            double h) {
  CMatrix g(w.dim());
  for (std::size_t i = 0; i < w.dim(); ++i) {
    for (std::size_t j = 0; j < w.dim(); ++j) {
      CMatrix p = w, m = w;
      p(i, j) += h;
      m(i, j) -= h;
      g(i, j) = (f(p) - f(m)) / (2.0 * h);
    }
  }
  return g;
}

void criterion_7() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t d = 2 + k % 3;
    Rng rng(mix_seed(k, 47));
    RealInstance inst;
    inst.x1 = random_matrix(rng, d, MatrixKind::kRealGaussian);
    inst.x2 = random_matrix(rng, d, MatrixKind::kRealGaussian);
    inst.y1 = random_matrix(rng, d, MatrixKind::kRealGaussian);
    inst.y2 = random_matrix(rng, d, MatrixKind::kRealGaussian);
    const CMatrix w1 =
        random_matrix(rng, d, MatrixKind::kRealGaussian, 1.0 / std::sqrt(static_cast<double>(d)));
    try {
      const CMatrix g = two_layer_gradient(w1, inst, Activation::kSigmoid);
      const CMatrix fd = central_differences(
          [&](const CMatrix& w) { return two_layer_numerator(w, inst, Activation::kSigmoid); }, w1,
          1e-6);
      worst = std::max(worst, frobenius_norm(g - fd) / frobenius_norm(fd));
    } catch (const Error&) {
      worst = INFINITY;
    }
  }
  report(7, worst <= 1e-5,
         fmt("50 sigmoid points, d in 2..4: max relative gradient error vs central differences "
             "%.3g (<= 1e-5)",
             worst));
}

}  // namespace

int main() {
  try {
    const Battery battery = make_battery();
    criteria_1_to_3(battery);
  } catch (const std::exception& e) {
    for (int id = 1; id <= 3; ++id) report(id, false, std::string("exception: ") + e.what());
  }
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
