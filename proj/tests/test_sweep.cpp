#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfcorr/sweep.hpp"

using namespace tfcorr;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

SweepConfig bare(int scenario, int steps) {
  SweepConfig c;
  c.scenario = scenario;
  c.d_steps = steps;
  return c;
}

SweepConfig protected_cfg(int scenario, int steps) {
  SweepConfig c;
  c.scenario = scenario;
  c.wmrwm = true;
  c.d_steps = steps;
  c.variants = {Variant::TF_MAX, Variant::C_MAX};
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST(SweepConfig, Validation) {
  EXPECT_NO_THROW(bare(1, 201).validate());
  auto c = bare(3, 10);
  EXPECT_THROW(c.validate(), DomainError);
  c = bare(1, 1);
  EXPECT_THROW(c.validate(), DomainError);
  c = bare(1, 10002);
  EXPECT_THROW(c.validate(), DomainError);
  c = bare(1, 10);
  c.d_start = 0.5;
  c.d_end = 0.5;
  EXPECT_THROW(c.validate(), DomainError);
  c = bare(1, 10);
  c.variants = {Variant::TF_MAX};
  EXPECT_THROW(c.validate(), DomainError);
  c = protected_cfg(1, 10);
  c.p = 1.0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(DGrid, EndpointsAndClamp) {
  const auto g = d_grid(bare(1, 201));
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[100], 0.5);
  EXPECT_EQ(d_grid(protected_cfg(1, 201)).back(), kProtectedDMax);
}

TEST(Fmt12, Formatting) {
  EXPECT_EQ(fmt12(-0.0), "0");
  EXPECT_EQ(fmt12(0.5), "0.5");
  EXPECT_EQ(fmt12(2.0 / 3.0), "0.666666666667");
}

TEST(RunSweep, ScenarioOneBareCrossesThreshold) {
  const auto rows = run_sweep(bare(1, 201));
  ASSERT_EQ(rows.size(), 201u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i].d;
    if (d <= 0.825) EXPECT_GT(rows[i].report.tf, 2.0 / 3.0) << d;
    if (d >= 0.830) EXPECT_LT(rows[i].report.tf, 2.0 / 3.0) << d;
    if (i > 0) EXPECT_GT(d, rows[i - 1].d);
  }
}

TEST(RunSweep, ScenarioTwoBareStaysAboveClassicalBound) {
  for (const auto& r : run_sweep(bare(2, 201))) {
    if (r.d < 1.0) EXPECT_GT(r.report.tf, 0.666667);
  }
}

TEST(RunSweep, ScenarioOneProtectedSuccessOrdering) {
  const auto rows = run_sweep(protected_cfg(1, 41));
  ASSERT_EQ(rows.size(), 82u);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    ASSERT_EQ(rows[i].variant, Variant::TF_MAX);
    ASSERT_EQ(rows[i + 1].variant, Variant::C_MAX);
    EXPECT_EQ(rows[i].d, rows[i + 1].d);
    EXPECT_GE(rows[i + 1].success_prob, rows[i].success_prob - 1e-12);
    EXPECT_TRUE(rows[i].q_star.has_value());
  }
}

TEST(RunSweep, ScenarioTwoVariantsCoincide) {
  const auto rows = run_sweep(protected_cfg(2, 21));
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_NEAR(rows[i].report.cc, rows[i + 1].report.cc, 1e-6);
    EXPECT_NEAR(rows[i].report.tf, rows[i + 1].report.tf, 1e-6);
    EXPECT_NEAR(rows[i].report.concurrence, rows[i + 1].report.concurrence, 1e-6);
  }
}

TEST(RunSweep, IndependentOfWorkerCount) {
  const auto cfg = protected_cfg(2, 17);
  const std::string one = to_csv(run_sweep(cfg, 1));
  EXPECT_EQ(one, to_csv(run_sweep(cfg, 3)));
  EXPECT_EQ(one, to_csv(run_sweep(cfg, 8)));
}

TEST(Csv, SchemaAndRowInvariants) {
  const std::string text = to_csv(run_sweep(protected_cfg(1, 11)) );
  const auto rows = parse_csv(text);
  ASSERT_EQ(rows.size(), 23u);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 16u);
    const double fef = std::stod(rows[i][6]);
    const double tf = std::stod(rows[i][7]);
    EXPECT_NEAR(tf, (2.0 * fef + 1.0) / 3.0, 1e-11);
    if (std::abs(fef - 0.5) > 1e-11) EXPECT_EQ(tf > 2.0 / 3.0, fef > 0.5);
    EXPECT_FALSE(rows[i][4].empty());
  }
  const auto bare_rows = parse_csv(to_csv(run_sweep(bare(1, 3))));
  EXPECT_TRUE(bare_rows[1][4].empty());
  EXPECT_EQ(bare_rows[1][0], "I_BARE");
  EXPECT_EQ(bare_rows[1][1], "NONE");
}

TEST(ParallelMap, PropagatesExceptions) {
  EXPECT_THROW(parallel_map<int>(
                   10, [](std::size_t i) -> int { if (i == 7) throw DomainError("boom"); return static_cast<int>(i); }, 4),
               DomainError);
  const auto v = parallel_map<int>(5, [](std::size_t i) { return static_cast<int>(i * i); }, 3);
  EXPECT_EQ(v, (std::vector<int>{0, 1, 4, 9, 16}));
}

TEST(Figure, CurveAndPanelLayout) {
  EXPECT_EQ(figure_curves(1).size() * figure_panels(1).size(), 6u);
  EXPECT_EQ(figure_panels(2).size(), 4u);
  EXPECT_EQ(figure_csv_name(2, 'b', "tfmax"), "fig2_b_tfmax.csv");
  const auto script = gnuplot_script(3);
  EXPECT_NE(script.find("2.0/3.0"), std::string::npos);
  EXPECT_NE(script.find("fig3_d_cmax.csv"), std::string::npos);
}

TEST(Figure, WriteFileErrors) {
  EXPECT_THROW(write_file("/nonexistent-dir/x/y.csv", "a"), IoError);
}

TEST(Figure, WritesAllFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "tfcorr_fig1_test";
  std::filesystem::remove_all(dir);
  const auto files = write_figure(1, dir);
  EXPECT_EQ(files.size(), 7u);
  for (const auto& f : files) EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  const auto rows = parse_csv(slurp(dir / "fig1_b_single.csv"));
  EXPECT_EQ(rows.size(), 202u);
  std::filesystem::remove_all(dir);
}
