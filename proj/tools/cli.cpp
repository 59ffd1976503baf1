#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <string_view>

#include "CLI11.hpp"
#include "expnet/errors.hpp"
#include "expnet/exact_solver.hpp"
#include "expnet/experiment.hpp"
#include "expnet/io.hpp"
#include "expnet/matfun.hpp"

namespace expnet::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::string kind = "complex";
  double alpha = std::numbers::e;
  double tol = kDefaultVerifyTol;
  double admission = kAdmissionRcond;
  std::int64_t branch_offset = 0;
  std::string instance_dir;
  std::string weights_path;
  std::string in_path;
  std::string out_path;

  // experiment
  std::string seeds = "1";
  std::string activation = "sigmoid";
  std::size_t steps = 2000;
  double lr = kDefaultLearningRate;
  std::string gradient_mode = "analytic";
  double rcond_floor = ExperimentConfig{}.rcond_floor;
  bool serial = false;
};

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid seed '" + std::string(text) + "'");
  }
  return v;
}

// "7", "1,2,5" or "1..10" (inclusive), and combinations like "1..3,9".
std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_u64(item));
    } else {
      const std::uint64_t lo = parse_u64(item.substr(0, dots));
      const std::uint64_t hi = parse_u64(item.substr(dots + 2));
      if (hi < lo) throw UsageError("empty seed range '" + std::string(item) + "'");
      if (hi - lo > 100000) throw UsageError("seed range too large");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (seeds.empty()) throw UsageError("no seeds given");
  return seeds;
}

void check_alpha(double alpha) {
  try {
    validate_alpha(alpha);
  } catch (const InvalidArgumentError& e) {
    throw UsageError(std::string("--alpha: ") + e.what());
  }
}

void check_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(flag) + " must be positive");
}

MatrixKind parse_kind(const std::string& kind) {
  if (kind == "complex") return MatrixKind::kComplexGaussian;
  if (kind == "real") return MatrixKind::kRealGaussian;
  throw UsageError("--kind must be 'complex' or 'real'");
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.dim == 0) throw UsageError("--dim must be at least 1");
  check_positive(o.admission, "--rcond-floor");
  const MatrixKind kind = parse_kind(o.kind);
  const SampledInstance s = sample_admitted_instance(o.dim, o.seed, kind, o.admission);
  const fs::path dir = o.out_path.empty() ? fs::path("instance") : fs::path(o.out_path);
  write_instance(dir, s.instance, o.seed, s.resamples);
  out << "instance " << dir.string() << " dim " << o.dim << " seed " << o.seed
      << " resamples " << s.resamples << " min_rcond " << format_double(s.instance.rconds.min())
      << '\n';
  return kOk;
}

void print_report(std::ostream& out, const SolveReport& r) {
  out << "residual1 " << format_double(r.residual1) << '\n'
      << "residual2 " << format_double(r.residual2) << '\n';
  for (const auto& [name, value] : r.identity_checks) {
    out << name << ' ' << format_double(value) << '\n';
  }
  out << "pass " << (r.pass ? "true" : "false") << " (tol " << format_double(r.tol) << ")\n";
}

int cmd_solve(const Options& o, std::ostream& out) {
  check_alpha(o.alpha);
  check_positive(o.tol, "--tol");
  check_positive(o.admission, "--rcond-floor");
  const fs::path dir(o.instance_dir);
  const ProblemInstance inst = read_instance(dir, o.admission);
  const ThreeLayerWeights w = solve_three_layer(inst, o.alpha, BranchSpec{o.branch_offset});
  const SolveReport report = verify(w, inst, o.tol);
  const fs::path out_dir = o.out_path.empty() ? dir : fs::path(o.out_path);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_weights(out_dir / "weights.json", w);
  write_report(out_dir / "report.json", report);
  print_report(out, report);
  return report.pass ? kOk : kVerifyFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
  check_positive(o.tol, "--tol");
  const ThreeLayerWeights w = read_weights(o.weights_path);
  check_alpha(w.alpha);
  const fs::path dir(o.instance_dir);
  const ProblemInstance inst = read_instance(dir, o.admission);
  const SolveReport report = verify(w, inst, o.tol);
  write_report(o.out_path.empty() ? dir / "report.json" : fs::path(o.out_path), report);
  print_report(out, report);
  return report.pass ? kOk : kVerifyFailed;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const ThreeLayerWeights w = read_weights(o.weights_path);
  const CMatrix x = read_matrix(o.in_path);
  const CMatrix y = eval_three_layer(w, x);
  write_matrix(o.out_path, y);
  out << "wrote " << o.out_path << '\n';
  return kOk;
}

int cmd_expm(const Options& o, std::ostream& out) {
  write_matrix(o.out_path, expm(read_matrix(o.in_path)));
  out << "wrote " << o.out_path << '\n';
  return kOk;
}

int cmd_logm(const Options& o, std::ostream& out) {
  const CMatrix a = read_matrix(o.in_path);
  const LogmResult result = logm_detailed(a, BranchSpec{o.branch_offset});
  write_matrix(o.out_path, result.log);
  const double residual = relative_difference(expm(result.log), a);
  out << "roundtrip_residual " << format_double(residual) << '\n'
      << "kappa " << format_double(result.kappa) << '\n'
      << "square_roots " << result.square_roots << '\n';
  return kOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  ExperimentConfig cfg;
  if (o.dim == 0) throw UsageError("--dim must be at least 1");
  cfg.dim = o.dim;
  cfg.seeds = parse_seeds(o.seeds);
  const auto act = parse_activation(o.activation);
  if (!act) throw UsageError("--activation must be relu, sigmoid or identity");
  cfg.activation = *act;
  const auto mode = parse_gradient_mode(o.gradient_mode);
  if (!mode) throw UsageError("--gradient-mode must be analytic or finite-difference");
  cfg.gradient_mode = *mode;
  cfg.steps = o.steps;
  check_positive(o.lr, "--lr");
  cfg.learning_rate = o.lr;
  check_positive(o.rcond_floor, "--rcond-floor");
  cfg.rcond_floor = o.rcond_floor;
  cfg.parallel = !o.serial;

  const ExperimentTrace trace = run_experiment(cfg);
  const std::string prefix = o.out_path.empty() ? "trace" : o.out_path;
  write_trace_csv(fs::path(prefix + ".csv"), trace);
  write_text_file(prefix + ".json", config_to_json(trace));
  out << "median_initial_s " << format_double(median(trace.initial_s())) << '\n'
      << "median_final_s " << format_double(median(trace.final_s())) << '\n'
      << "resamples " << trace.total_resamples() << '\n'
      << "diverged " << trace.diverged_count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"expnet: closed-form three-layer matrix-exponential networks"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Sample an admitted complex Gaussian instance");
  gen->add_option("--dim", o.dim, "Matrix dimension d")->required();
  gen->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  gen->add_option("--kind", o.kind, "Entry distribution: complex or real")->capture_default_str();
  gen->add_option("--rcond-floor", o.admission,
                  "Admission threshold on rcond of X1, X2, Y1, Y2 and X1 - X2")
      ->capture_default_str();
  gen->add_option("--out", o.out_path, "Output directory (default: instance)");

  auto* solve = app.add_subcommand("solve", "Build the three-layer weights and verify them");
  solve->add_option("--instance", o.instance_dir, "Instance directory")->required();
  solve->add_option("--alpha", o.alpha,
                    "Positive alpha != 1; any such value works, e makes ln(alpha) = 1")
      ->capture_default_str();
  solve->add_option("--tol", o.tol, "Relative residual tolerance for pass")->capture_default_str();
  solve->add_option("--branch-offset", o.branch_offset, "Logarithm branch offset k for Z")
      ->capture_default_str();
  solve->add_option("--rcond-floor", o.admission, "Admission threshold")->capture_default_str();
  solve->add_option("--out", o.out_path, "Output directory (default: the instance directory)");

  auto* verify_cmd = app.add_subcommand("verify", "Check stored weights against an instance");
  verify_cmd->add_option("--weights", o.weights_path, "Weights JSON")->required();
  verify_cmd->add_option("--instance", o.instance_dir, "Instance directory")->required();
  verify_cmd->add_option("--tol", o.tol, "Relative residual tolerance")->capture_default_str();
  verify_cmd->add_option("--rcond-floor", o.admission, "Admission threshold")
      ->capture_default_str();
  verify_cmd->add_option("--out", o.out_path, "Report path (default: <instance>/report.json)");

  auto* eval = app.add_subcommand("eval", "Evaluate W3 exp(W2 exp(W1 X))");
  eval->add_option("--weights", o.weights_path, "Weights JSON")->required();
  eval->add_option("--in", o.in_path, "Input matrix JSON")->required();
  eval->add_option("--out", o.out_path, "Output matrix JSON")->required();

  auto* expm_cmd = app.add_subcommand("expm", "Matrix exponential of a matrix file");
  expm_cmd->add_option("--in", o.in_path, "Input matrix JSON")->required();
  expm_cmd->add_option("--out", o.out_path, "Output matrix JSON")->required();

  auto* logm_cmd = app.add_subcommand("logm", "Matrix logarithm of a matrix file");
  logm_cmd->add_option("--in", o.in_path, "Input matrix JSON")->required();
  logm_cmd->add_option("--out", o.out_path, "Output matrix JSON")->required();
  logm_cmd->add_option("--branch-offset", o.branch_offset,
                       "Branch k: log = ln|l| + i(arg l + 2 pi k)")
      ->capture_default_str();

  auto* exp_cmd =
      app.add_subcommand("experiment", "Gradient descent on the two-layer element-wise score");
  exp_cmd->add_option("--dim", o.dim, "Matrix dimension d")->required();
  exp_cmd->add_option("--seeds", o.seeds, "Seeds: 7, 1,2,3 or 1..10")->capture_default_str();
  exp_cmd->add_option("--activation", o.activation, "relu, sigmoid or identity")
      ->capture_default_str();
  exp_cmd->add_option("--steps", o.steps, "Gradient-descent steps")->capture_default_str();
  exp_cmd->add_option("--lr", o.lr,
                      "Step size on the normalized score s; no value is prescribed, 0.1 was "
                      "chosen empirically")
      ->capture_default_str();
  exp_cmd->add_option("--gradient-mode", o.gradient_mode, "analytic or finite-difference")
      ->capture_default_str();
  exp_cmd->add_option("--rcond-floor", o.rcond_floor,
                      "Reject instances and activations with rcond at or below this")
      ->capture_default_str();
  exp_cmd->add_flag("--serial", o.serial, "Run seeds sequentially");
  exp_cmd->add_option("--out", o.out_path, "Output prefix for .csv and .json (default: trace)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*solve) return cmd_solve(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*eval) return cmd_eval(o, out);
    if (*expm_cmd) return cmd_expm(o, out);
    if (*logm_cmd) return cmd_logm(o, out);
    if (*exp_cmd) return cmd_experiment(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const InstanceRejectedError& e) {
    err << "instance error: " << e.what() << '\n';
    return kInstance;
  } catch (const MaxResampleError& e) {
    err << "instance error: " << e.what() << '\n';
    return kInstance;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace expnet::cli
