#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "expnet/io.hpp"

namespace expnet {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("expnet_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(MatrixJsonTest, RoundtripIsBitExactProperty) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CMatrix m = random_matrix(1 + seed % 9, seed, MatrixKind::kComplexGaussian);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  }
  const CMatrix tiny{{Complex(5e-324, -1e308)}, };
  EXPECT_EQ(matrix_from_json(matrix_to_json(tiny)), tiny);
}

TEST(MatrixJsonTest, Layout) {
  EXPECT_EQ(matrix_to_json(CMatrix{{Complex(1.0, -0.5), 2.0}, {0.0, 0.1}}),
            R"({"dim":2,"entries":[[[1,-0.5],[2,0]],[[0,0],[0.10000000000000001,0]]]})"
            "\n");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(MatrixJsonTest, MalformedInputIsFormatError) {
  for (const char* bad : {"", "{", "[]", R"({"dim":2})", R"({"dim":1,"entries":[[1]]})",
                          R"({"dim":2,"entries":[[[1,0],[2,0]]]})",
                          R"({"dim":1,"entries":[[[1,0,3]]]})",
                          R"({"dim":1,"entries":[[["a",0]]]})",
                          R"({"dim":0,"entries":[]})"}) {
    EXPECT_THROW(matrix_from_json(bad), InputError) << bad;
  }
  EXPECT_THROW(matrix_from_json("{"), FormatError);
}

TEST(MatrixJsonTest, FileRoundtripAndMissingFile) {
  const fs::path dir = scratch_dir("matrix");
  const CMatrix m = random_matrix(3, 4, MatrixKind::kComplexGaussian);
  write_matrix(dir / "m.json", m);
  EXPECT_EQ(read_matrix(dir / "m.json"), m);
  EXPECT_THROW(read_matrix(dir / "absent.json"), IoError);
  EXPECT_THROW(write_matrix(dir / "no" / "such" / "dir" / "m.json", m), IoError);
}

TEST(InstanceIoTest, RoundtripRecomputesRconds) {
  const fs::path dir = scratch_dir("instance");
  const SampledInstance s = sample_admitted_instance(3, 8);
  write_instance(dir, s.instance, 8, s.resamples);
  for (const char* f : {"x1.json", "x2.json", "y1.json", "y2.json", "instance.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const ProblemInstance back = read_instance(dir);
  EXPECT_EQ(back.x1, s.instance.x1);
  EXPECT_EQ(back.y2, s.instance.y2);
  EXPECT_EQ(back.rconds.min(), s.instance.rconds.min());
  EXPECT_TRUE(back.admitted());
}

TEST(WeightsIoTest, Roundtrip) {
  const ProblemInstance inst = sample_admitted_instance(3, 9).instance;
  const ThreeLayerWeights w = solve_three_layer(inst, 2.0);
  const ThreeLayerWeights back = weights_from_json(weights_to_json(w));
  EXPECT_EQ(back.alpha, w.alpha);
  EXPECT_EQ(back.w1, w.w1);
  EXPECT_EQ(back.w2, w.w2);
  EXPECT_EQ(back.w3, w.w3);
  EXPECT_EQ(back.z, w.z);
  EXPECT_THROW(weights_from_json(R"({"alpha":2})"), FormatError);
}

TEST(ReportIoTest, NonFiniteBecomesNull) {
  SolveReport r;
  r.residual1 = std::numeric_limits<double>::infinity();
  r.residual2 = 1e-15;
  r.identity_checks["commutation"] = 2e-16;
  const std::string text = report_to_json(r);
  EXPECT_NE(text.find("\"residual1\":null"), std::string::npos) << text;
  EXPECT_NE(text.find("\"residual2\":1.0000000000000001e-15"), std::string::npos) << text;
  EXPECT_NE(text.find("\"pass\":false"), std::string::npos) << text;
}

TEST(TraceCsvTest, HeaderAndRows) {
  ExperimentTrace t;
  SeedTrace a;
  a.seed = 3;
  a.s = {1.0, 0.5};
  SeedTrace b;
  b.seed = 9;
  b.s = {0.25};
  t.runs = {a, b};
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(), "seed,step,s\n3,0,1\n3,1,0.5\n9,0,0.25\n");
}

}  // namespace
}  // namespace expnet
