#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "expnet/cmatrix.hpp"
#include "expnet/errors.hpp"
#include "expnet/exact_solver.hpp"
#include "expnet/experiment.hpp"

namespace expnet {

// I/O failure (unreadable or unwritable file).
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON or a document that does not match the expected schema.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

// {"dim": d, "entries": [[[re, im], ...], ...]} with 17 significant digits.
std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

void write_matrix(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix(const std::filesystem::path& path);

// Instance directory layout: x1.json x2.json y1.json y2.json instance.json.
void write_instance(const std::filesystem::path& dir, const ProblemInstance& inst,
                    std::uint64_t seed, int resamples);
ProblemInstance read_instance(const std::filesystem::path& dir,
                              double admission_threshold = kAdmissionRcond);

std::string weights_to_json(const ThreeLayerWeights& w);
ThreeLayerWeights weights_from_json(const std::string& text);
void write_weights(const std::filesystem::path& path, const ThreeLayerWeights& w);
ThreeLayerWeights read_weights(const std::filesystem::path& path);

std::string report_to_json(const SolveReport& report);
void write_report(const std::filesystem::path& path, const SolveReport& report);

// CSV with header "seed,step,s", one row per recorded step.
void write_trace_csv(std::ostream& out, const ExperimentTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const ExperimentTrace& trace);
std::string config_to_json(const ExperimentTrace& trace);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// printf "%.17g"; used by every writer.
std::string format_double(double v);

}  // namespace expnet
