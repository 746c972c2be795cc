#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <cli.hpp>

namespace hazardfield::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("HAZARDFIELD_TEST_TMP");
  fs::path dir = (base && *base) ? fs::path(base) : fs::temp_directory_path() / "hazardfield_cli";
  dir /= name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
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

// "key,value" lines of a report.
std::map<std::string, std::string> report(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma != std::string::npos) m[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return m;
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) { setenv("HAZARDFIELD_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("HAZARDFIELD_THREADS"); }
};

const std::string kExample1 = "1 - x^0.5 * y^0.05 / 100";
const std::string kExample2 = "5 ^ sqrt(y) * 7 ^ (x^3)";

TEST(Eval, ExampleTwoField) {
  const fs::path dir = scratch("eval_example2");
  const Result r = run_cli({"eval", "--expr", kExample2, "--domain", "10:80,1:5", "--lattice",
                            "71,41", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir / "field.csv");
  ASSERT_EQ(rows.size(), 2912U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "y", "mu_x", "mu_y"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][2]), 0) << i;
  EXPECT_EQ(report(r.out)["nodes"], "2911");
  EXPECT_EQ(report(r.out)["failed"], "0");
}

TEST(Eval, ConstantSurfaceZeroField) {
  const fs::path dir = scratch("eval_constant");
  const Result r = run_cli({"eval", "--expr", "0.5", "--domain", "0:1,0:1", "--lattice", "3,3",
                            "--axes", "x,y", "--dmu", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir / "field.csv");
  ASSERT_EQ(rows.size(), 10U);
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (std::size_t j = 2; j < rows[i].size(); ++j) EXPECT_EQ(std::stod(rows[i][j]), 0.0);
}

TEST(Eval, InvalidSubregionExitsTwo) {
  const fs::path dir = scratch("eval_invalid");
  const Result r = run_cli({"eval", "--expr", "1 - x^3 * y^0.1 / 100", "--domain", "10:80,1:5",
                            "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("node 0 "), std::string::npos);
  EXPECT_NE(report(r.out)["failed"], "0");
  EXPECT_TRUE(fs::exists(dir / "field.csv"));
}

TEST(ConfigErrors, ExitOne) {
  const fs::path dir = scratch("config_errors");
  EXPECT_EQ(run_cli({"eval", "--domain", "0:1", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"eval", "--expr", "x", "--domain", "1:0", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"eval", "--expr", "x +", "--domain", "0:1", "--out", dir.string()}).code, 1);
  EXPECT_EQ(run_cli({"eval", "--expr", "x", "--domain", "0:1", "--bogus"}).code, 1);
  EXPECT_EQ(run_cli({"eval", "--expr", "x", "--domain", "0:1", "--order", "0"}).code, 1);
  EXPECT_EQ(run_cli({"estimate", "--grid", (dir / "missing.csv").string()}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"figures", "--figure", "4", "--out", dir.string()}).code, 1);
  const Result parse = run_cli({"eval", "--expr", "x + ", "--domain", "0:1", "--out", dir.string()});
  EXPECT_NE(parse.err.find("offset 4"), std::string::npos) << parse.err;
}

TEST(ConfigErrors, BadThreadsEnv) {
  ThreadsEnv env("many");
  EXPECT_EQ(run_cli({"validate"}).code, 1);
}

TEST(ConfigFile, FlagsWin) {
  const fs::path dir = scratch("config_file");
  write_file(dir / "run.cfg",
             "# example\nexpr = " + kExample1 + "\ndomain = 10:80,1:5\nlattice = 3,3\nout = " +
                 (dir / "from_file").string() + "\n");
  const Result a = run_cli({"eval", "--config", (dir / "run.cfg").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(read_csv(dir / "from_file" / "field.csv").size(), 10U);
  const Result b = run_cli({"eval", "--config", (dir / "run.cfg").string(), "--lattice", "4,2",
                            "--out", (dir / "from_flags").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_csv(dir / "from_flags" / "field.csv").size(), 9U);
  write_file(dir / "bad.cfg", "expr\n");
  EXPECT_EQ(run_cli({"eval", "--config", (dir / "bad.cfg").string()}).code, 1);
}

TEST(Validate, DefaultSuitePasses) {
  const Result r = run_cli({"validate"});
  EXPECT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.substr(line.size() - 4), "PASS") << line;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3) << line;
  }
  EXPECT_GE(lines, 10);
}

TEST(Validate, CorruptedGridExitsThree) {
  const fs::path dir = scratch("validate_grid");
  write_file(dir / "bad.csv", "x,y,l\n0,0,1\n0,1,0.9\n1,0,-0.5\n1,1,0.7\n");
  const Result r = run_cli({"validate", "--grid", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("positivity_grid,1,0,FAIL"), std::string::npos) << r.out;
}

TEST(Validate, ExpressionSuite) {
  const Result r = run_cli({"validate", "--expr", kExample1, "--domain", "10:80,1:5"});
  EXPECT_EQ(r.code, 0) << r.out;
  const Result bad = run_cli({"validate", "--expr", "1 - x^3 * y^0.1 / 100", "--domain", "10:80,1:5"});
  EXPECT_EQ(bad.code, 3) << bad.out;
}

TEST(Estimate, TwoByTwoGridIsAllBoundary) {
  const fs::path dir = scratch("estimate_2x2");
  write_file(dir / "g.csv", "x,y,l\n0,0,1\n0,1,0.9\n1,0,0.8\n1,1,0.7\n");
  const Result r = run_cli({"estimate", "--grid", (dir / "g.csv").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto rows = read_csv(dir / "field.csv");
  ASSERT_EQ(rows.size(), 5U);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][2], "");
}

TEST(Estimate, ShuffledRowsExitOne) {
  const fs::path dir = scratch("estimate_shuffled");
  write_file(dir / "g.csv", "x,y,l\n0,0,1\n1,0,0.8\n0,1,0.9\n1,1,0.7\n");
  const Result r = run_cli({"estimate", "--grid", (dir / "g.csv").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Estimate, OneSidedFillsBoundary) {
  const fs::path dir = scratch("estimate_one_sided");
  write_file(dir / "g.csv", "x,l\n0,1\n1,0.9\n2,0.8\n3,0.7\n");
  const Result r = run_cli({"estimate", "--grid", (dir / "g.csv").string(), "--one-sided",
                            "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir / "field.csv");
  ASSERT_EQ(rows.size(), 5U);
  EXPECT_LE(std::abs(std::stod(rows[1][1]) - 0.1), 1e-15);
}

// Writes l of `expr` on the lattice with eval, then estimates from that CSV.
void round_trip(const std::string& expr, const std::string& domain, const std::string& lattice,
                const std::string& delta, const std::string& method, const std::string& axes,
                const std::string& name) {
  const fs::path dir = scratch(name);
  const Result e = run_cli({"eval", "--expr", expr, "--domain", domain, "--lattice", lattice,
                            "--axes", axes, "--out", (dir / "exact").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  const Result s = run_cli({"estimate", "--grid", (dir / "exact" / "surface.csv").string(),
                            "--delta", delta, "--richardson", "2", "--method", method, "--axes",
                            axes, "--out", (dir / "estimated").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto exact = read_csv(dir / "exact" / "field.csv");
  const auto est = read_csv(dir / "estimated" / "field.csv");
  ASSERT_EQ(exact.size(), est.size());
  int compared = 0;
  for (std::size_t i = 1; i < exact.size(); ++i) {
    EXPECT_EQ(exact[i][0], est[i][0]);
    EXPECT_EQ(exact[i][1], est[i][1]);
    for (std::size_t j = 2; j < exact[i].size(); ++j) {
      if (est[i][j].empty()) continue;
      const double a = std::stod(exact[i][j]), b = std::stod(est[i][j]);
      EXPECT_LE(std::abs(a - b) / std::abs(a), 1e-6) << "row " << i;
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(RoundTrip, ExampleOneDirect) {
  round_trip(kExample1, "20:20.4,2:2.4", "41,41", "0.01,0.01", "direct", "x,y", "rt_example1");
}

TEST(RoundTrip, ExampleTwoLog) {
  round_trip(kExample2, "10:10.4,3.8:4.2", "41,41", "0.01,0.01", "log", "x,y", "rt_example2");
}

TEST(Figures, PanelsManifestAndDeterminism) {
  const fs::path a = scratch("figures_a"), b = scratch("figures_b");
  {
    ThreadsEnv env("1");
    const Result r = run_cli({"figures", "--out", a.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  {
    ThreadsEnv env("4");
    const Result r = run_cli({"figures", "--out", b.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  int files = 0;
  for (int id = 1; id <= 3; ++id) {
    const auto manifest = read_csv(a / ("figure" + std::to_string(id) + "_manifest.csv"));
    ASSERT_EQ(manifest.size(), 10U);
    EXPECT_EQ(manifest[0], (std::vector<std::string>{"figure", std::to_string(id)}));
    for (int j = 1; j <= 9; ++j) {
      const auto& row = manifest[static_cast<std::size_t>(j)];
      ASSERT_EQ(row.size(), 6U);
      EXPECT_EQ(row[0], "panel");
      EXPECT_EQ(row[1], std::to_string(id) + "(a-" + std::to_string(j) + ")");
      EXPECT_DOUBLE_EQ(std::stod(row[2]), j / 10.0);
      EXPECT_DOUBLE_EQ(std::stod(row[3]), (10 - j) / 10.0);
      EXPECT_EQ(row[4], "100");
      EXPECT_EQ(slurp(a / row[5]), slurp(b / row[5]));
      EXPECT_EQ(read_csv(a / row[5]).size(), 2912U);
      ++files;
    }
  }
  EXPECT_EQ(files, 27);
  // a = b = 0.5 panel, first node (10, 1).
  EXPECT_NEAR(std::stod(read_csv(a / "figure1_panel5.csv")[1][2]), 0.96837722339831620668, 1e-16);
  EXPECT_NEAR(std::stod(read_csv(a / "figure2_panel5.csv")[1][2]), 0.0016327716016858755, 1e-17);
  EXPECT_NEAR(std::stod(read_csv(a / "figure3_panel5.csv")[1][2]), 0.0016327716016858755, 1e-17);
}

TEST(Integrate, DeathsReport) {
  const Result r = run_cli({"integrate", "--expr", kExample1, "--domain", "5:85,0.5:5.5", "--slice",
                            "1", "--x", "10", "--m", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = report(r.out);
  EXPECT_NEAR(std::stod(m.at("deaths")), 0.013098582948312000608, 1e-10);
  EXPECT_NEAR(std::stod(m.at("survivor_drop")), 0.013098582948312000608, 1e-15);
  EXPECT_NEAR(std::stod(m.at("derivative_integral")), -0.013098582948312000608, 1e-10);
  EXPECT_NEAR(std::stod(m.at("corrected_lhs")), std::stod(m.at("corrected_rhs")), 1e-10);
}

TEST(Integrate, RegionMean) {
  const Result r = run_cli({"integrate", "--expr", kExample2, "--domain", "10:80,1:5", "--region",
                            "10:20,1:5", "--axis", "x"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = report(r.out);
  EXPECT_NEAR(std::stod(m.at("region_mean")), -1362.1371043387193136, 1362.14 * 1e-9);
  EXPECT_LE(std::stod(m.at("region_min")), std::stod(m.at("region_mean")));
  EXPECT_LE(std::stod(m.at("region_mean")), std::stod(m.at("region_max")));
}

TEST(Integrate, ConstantFieldRegion) {
  const Result r = run_cli({"integrate", "--expr", "exp(-0.01 * x)", "--domain", "0:10,0:1",
                            "--region", "1:3,0:1", "--axis", "x", "--panels", "4,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = report(r.out);
  EXPECT_EQ(m.at("region_mean"), m.at("region_min"));
  EXPECT_EQ(m.at("region_mean"), m.at("region_max"));
}

TEST(Integrate, NeedsLimits) {
  EXPECT_EQ(run_cli({"integrate", "--expr", kExample1, "--domain", "10:80,1:5"}).code, 1);
  EXPECT_EQ(run_cli({"integrate", "--expr", kExample1, "--domain", "10:80,1:5", "--x", "10"}).code, 1);
}

}  // namespace
}  // namespace hazardfield::cli
