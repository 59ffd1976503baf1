#include "expnet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace expnet {

namespace {

using nlohmann::json;

// Compact serializer that prints every float with 17 significant digits
// (nlohmann's own dump uses shortest round-trip output).
void emit(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        emit(out, value);
      }
      out += '}';
      return;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(out, j[i]);
      }
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string dump17(const json& j) {
  std::string out;
  emit(out, j);
  out += '\n';
  return out;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

CMatrix matrix_from(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const json& rows = j.at("entries");
    if (dim == 0 || !rows.is_array() || rows.size() != dim) {
      throw FormatError("matrix JSON: 'entries' must have 'dim' rows");
    }
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (const json& row : rows) {
      if (!row.is_array() || row.size() != dim) {
        throw FormatError("matrix JSON: every row must have 'dim' entries");
      }
      for (const json& z : row) {
        if (!z.is_array() || z.size() != 2) {
          throw FormatError("matrix JSON: entries must be [re, im] pairs");
        }
        entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
    }
    return CMatrix(dim, std::move(entries));
  } catch (const json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string matrix_to_json(const CMatrix& m) { return dump17(matrix_json(m)); }

CMatrix matrix_from_json(const std::string& text) { return matrix_from(parse(text, "matrix JSON")); }

void write_matrix(const std::filesystem::path& path, const CMatrix& m) {
  write_text_file(path, matrix_to_json(m));
}

CMatrix read_matrix(const std::filesystem::path& path) {
  return matrix_from_json(read_text_file(path));
}

void write_instance(const std::filesystem::path& dir, const ProblemInstance& inst,
                    std::uint64_t seed, int resamples) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_matrix(dir / "x1.json", inst.x1);
  write_matrix(dir / "x2.json", inst.x2);
  write_matrix(dir / "y1.json", inst.y1);
  write_matrix(dir / "y2.json", inst.y2);
  const json manifest = {
      {"dim", inst.dim()},
      {"seed", seed},
      {"resamples", resamples},
      {"admission_threshold", inst.admission_threshold},
      {"admitted", inst.admitted()},
      {"rconds",
       {{"x1", inst.rconds.x1},
        {"x2", inst.rconds.x2},
        {"y1", inst.rconds.y1},
        {"y2", inst.rconds.y2},
        {"x1_minus_x2", inst.rconds.x1_minus_x2}}},
      {"files", {{"x1", "x1.json"}, {"x2", "x2.json"}, {"y1", "y1.json"}, {"y2", "y2.json"}}}};
  write_text_file(dir / "instance.json", dump17(manifest));
}

ProblemInstance read_instance(const std::filesystem::path& dir, double admission_threshold) {
  return make_instance(read_matrix(dir / "x1.json"), read_matrix(dir / "x2.json"),
                       read_matrix(dir / "y1.json"), read_matrix(dir / "y2.json"),
                       admission_threshold);
}

std::string weights_to_json(const ThreeLayerWeights& w) {
  return dump17({{"alpha", w.alpha},
                 {"w1", matrix_json(w.w1)},
                 {"w2", matrix_json(w.w2)},
                 {"w3", matrix_json(w.w3)},
                 {"z", matrix_json(w.z)}});
}

ThreeLayerWeights weights_from_json(const std::string& text) {
  const json j = parse(text, "weights JSON");
  try {
    ThreeLayerWeights w;
    w.alpha = j.at("alpha").get<double>();
    w.w1 = matrix_from(j.at("w1"));
    w.w2 = matrix_from(j.at("w2"));
    w.w3 = matrix_from(j.at("w3"));
    w.z = matrix_from(j.at("z"));
    if (w.w2.dim() != w.w1.dim() || w.w3.dim() != w.w1.dim() || w.z.dim() != w.w1.dim()) {
      throw FormatError("weights JSON: matrices must share one dimension");
    }
    return w;
  } catch (const json::exception& e) {
    throw FormatError(std::string("weights JSON: ") + e.what());
  }
}

void write_weights(const std::filesystem::path& path, const ThreeLayerWeights& w) {
  write_text_file(path, weights_to_json(w));
}

ThreeLayerWeights read_weights(const std::filesystem::path& path) {
  return weights_from_json(read_text_file(path));
}

std::string report_to_json(const SolveReport& report) {
  json checks = json::object();
  for (const auto& [name, value] : report.identity_checks) checks[name] = finite_or_null(value);
  return dump17({{"residual1", finite_or_null(report.residual1)},
                 {"residual2", finite_or_null(report.residual2)},
                 {"identity_checks", std::move(checks)},
                 {"admitted", report.admitted},
                 {"tol", report.tol},
                 {"pass", report.pass}});
}

void write_report(const std::filesystem::path& path, const SolveReport& report) {
  write_text_file(path, report_to_json(report));
}

void write_trace_csv(std::ostream& out, const ExperimentTrace& trace) {
  out << "seed,step,s\n";
  for (const auto& run : trace.runs) {
    for (std::size_t step = 0; step < run.s.size(); ++step) {
      out << run.seed << ',' << step << ',' << format_double(run.s[step]) << '\n';
    }
  }
}

void write_trace_csv(const std::filesystem::path& path, const ExperimentTrace& trace) {
  std::ostringstream ss;
  write_trace_csv(ss, trace);
  write_text_file(path, ss.str());
}

std::string config_to_json(const ExperimentTrace& trace) {
  const ExperimentConfig& cfg = trace.config;
  json runs = json::array();
  for (const auto& r : trace.runs) {
    runs.push_back({{"seed", r.seed},
                    {"denominator", r.denominator},
                    {"initial_s", r.s.front()},
                    {"final_s", r.s.back()},
                    {"resamples", r.resamples},
                    {"singular_steps", r.singular_steps},
                    {"diverged", r.diverged}});
  }
  json summary = json::object();
  if (!trace.runs.empty()) {
    summary = {{"median_initial_s", median(trace.initial_s())},
               {"median_final_s", median(trace.final_s())},
               {"resamples", trace.total_resamples()},
               {"diverged", trace.diverged_count()}};
  }
  return dump17({{"dim", cfg.dim},
                 {"seeds", cfg.seeds},
                 {"activation", std::string(to_string(cfg.activation))},
                 {"steps", cfg.steps},
                 {"learning_rate", cfg.effective_learning_rate()},
                 {"gradient_mode", std::string(to_string(cfg.gradient_mode))},
                 {"rcond_floor", cfg.rcond_floor},
                 {"weight_init_stddev", 1.0 / std::sqrt(static_cast<double>(cfg.dim))},
                 {"rng", "mt19937_64 + Marsaglia polar"},
                 {"runs", std::move(runs)},
                 {"summary", std::move(summary)}});
}

}  // namespace expnet
