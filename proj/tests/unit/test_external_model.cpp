#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "dgsmlab/error.hpp"
#include "dgsmlab/external_model.hpp"
#include "dgsmlab/sampling.hpp"

using namespace dgsmlab;

namespace {

std::string stub(const std::string& name) {
  return (std::filesystem::path(STUB_DIR) / ("stub_" + name)).string();
}

}  // namespace

TEST(ExternalModel, EchoFirstColumnIsIdentity) {
  const auto m = external_model(stub("echo_first_column"), ".", 3, "echo");
  EXPECT_EQ(m->name(), "echo");
  EXPECT_EQ(m->dimension(), 3u);
  const Matrix x = generate_unit(Generator::MonteCarlo, 50, 3, 1).points;
  const auto y = m->evaluate_rows(x);
  ASSERT_EQ(y.size(), 50u);
  // 17 significant digits round-trip exactly.
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(y[i], x(i, 0));
  EXPECT_EQ(m->evaluate(std::vector<double>{0.25, 9, 9}), 0.25);
}

TEST(ExternalModel, FloodStubMatchesBuiltin) {
  const auto ext = external_model(stub("flood_s"), ".", 8);
  const auto builtin = flood_overflow();
  const Matrix x = transform(generate_unit(Generator::MonteCarlo, 100, 8, 2), flood_input_space());
  const auto y = ext->evaluate_rows(x, 3);
  const auto ref = builtin->evaluate_rows(x);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_NEAR(y[i], ref[i], 1e-9 * std::max(1.0, std::abs(ref[i])));
}

TEST(ExternalModel, ParallelBatchesGiveSameOutputs) {
  const auto m = external_model(stub("echo_first_column"), ".", 2);
  const Matrix x = generate_unit(Generator::MonteCarlo, 101, 2, 3).points;
  EXPECT_EQ(m->evaluate_rows(x, 1), m->evaluate_rows(x, 4));
}

TEST(ExternalModel, RowCountMismatch) {
  const auto m = external_model(stub("short_output"), ".", 2);
  const Matrix x = generate_unit(Generator::MonteCarlo, 5, 2, 3).points;
  EXPECT_THROW(m->evaluate_rows(x), EvaluationError);
}

TEST(ExternalModel, NonzeroExitCarriesStderr) {
  const auto m = external_model(stub("failing_model"), ".", 2);
  try {
    m->evaluate(std::vector<double>{0.1, 0.2});
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(e.diagnostics().find("solver diverged"), std::string::npos) << e.diagnostics();
  }
}

TEST(ExternalModel, MalformedOutput) {
  const auto m = external_model("while read l; do echo not-a-number; done", ".", 1);
  EXPECT_THROW(m->evaluate(std::vector<double>{0.5}), EvaluationError);
}

TEST(ExternalModel, NonFiniteOutput) {
  for (const char* token : {"nan", "inf", "-inf"}) {
    const auto m = external_model(std::string("while read l; do echo ") + token + "; done", ".", 1);
    EXPECT_THROW(m->evaluate(std::vector<double>{0.5}), EvaluationError) << token;
  }
}

TEST(ExternalModel, RunsInWorkdir) {
  const auto dir = std::filesystem::temp_directory_path() / "dgsmlab_workdir_test";
  std::filesystem::create_directories(dir);
  {
    std::FILE* f = std::fopen((dir / "offset.txt").c_str(), "w");
    std::fputs("3\n", f);
    std::fclose(f);
  }
  const auto m = external_model("o=$(cat offset.txt); while read l; do echo $o; done", dir, 1);
  EXPECT_EQ(m->evaluate(std::vector<double>{0.5}), 3.0);
  std::filesystem::remove_all(dir);
}

TEST(ExternalModel, NoGradient) {
  const auto m = external_model(stub("echo_first_column"), ".", 2);
  EXPECT_FALSE(m->has_gradient());
  const auto g = gradient(*m, std::vector<double>{0.3, 0.4}, GradientMethod::forward());
  EXPECT_NEAR(g[0], 1.0, 1e-6);
  EXPECT_NEAR(g[1], 0.0, 1e-12);
}
