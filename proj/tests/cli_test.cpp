// Exercises the built binary end to end through std::system: exit codes,
// CSV schema, seed override, and the thread-count determinism contract.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli_path() {
  const char* env = std::getenv("FBSDE_CLI");
  return env ? env : "";
}

std::string config_dir() {
  const char* env = std::getenv("FBSDE_CONFIG_DIR");
  return env ? env : "";
}

int run_cli(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = cli_path() + " " + args;
  if (!stderr_file.empty()) cmd += " 2> " + stderr_file;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

TEST(Cli, LinearSmokeProducesAccurateCsv) {
  ASSERT_FALSE(cli_path().empty());
  const std::string out = "/tmp/fbsde_smoke.csv";
  const int code = run_cli("run " + config_dir() + "/linear_smoke.cfg --out " +
                           out + " --threads 2");
  ASSERT_EQ(code, 0);
  const std::string csv = slurp(out);
  std::stringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "experiment,model,estimator_tag,t,s,x0,v,value,std_error,n_paths,"
            "n_rejected,seed,runtime_ms");
  std::string row;
  int n_rows = 0;
  while (std::getline(lines, row)) {
    if (row.empty()) continue;
    ++n_rows;
    const auto cells = split_csv_line(row);
    ASSERT_EQ(cells.size(), 13u);
    EXPECT_EQ(cells[0], "linear_smoke");
    const double value = std::stod(cells[7]);
    const double se = std::stod(cells[8]);
    // a = (1, 0.5); direction 1 is e1, direction 2 is (0.8, 0.6).
    const double expected = cells[6] == "1;0" ? 1.0 : 1.1;
    EXPECT_NEAR(value, expected, 3.0 * se + 1e-9);
  }
  EXPECT_EQ(n_rows, 4);  // 2 estimators x 2 directions
}

TEST(Cli, MissingSectionExitsTwoAndNamesIt) {
  const std::string bad = "/tmp/fbsde_bad.cfg";
  {
    std::ofstream out(bad);
    out << "[model]\nkind = unit\ndim = 2\n[mc]\npaths = 10\n"
        << "[experiment]\nname = broken\nestimators = bismut\nx0 = 0, 0\n"
        << "directions = 1, 0\npayoff = linear\npayoff_vector = 1, 1\n";
  }
  const std::string err_file = "/tmp/fbsde_bad.err";
  const int code = run_cli("run " + bad, err_file);
  EXPECT_EQ(code, 2);
  const std::string err = slurp(err_file);
  EXPECT_NE(err.find("grid"), std::string::npos);
}

TEST(Cli, MissingConfigArgumentExitsTwo) {
  EXPECT_EQ(run_cli("run", "/dev/null"), 2);
  EXPECT_EQ(run_cli("run /nonexistent.cfg", "/dev/null"), 2);
}

TEST(Cli, SeedOverrideChangesValues) {
  const std::string out_a = "/tmp/fbsde_seed_a.csv";
  const std::string out_b = "/tmp/fbsde_seed_b.csv";
  ASSERT_EQ(run_cli("run " + config_dir() + "/linear_smoke.cfg --out " + out_a +
                    " --seed 1"),
            0);
  ASSERT_EQ(run_cli("run " + config_dir() + "/linear_smoke.cfg --out " + out_b +
                    " --seed 2"),
            0);
  EXPECT_NE(slurp(out_a), slurp(out_b));
}

TEST(Cli, ThreadCountDoesNotChangeBytes) {
  const std::string out_a = "/tmp/fbsde_t1.csv";
  const std::string out_b = "/tmp/fbsde_t8.csv";
  ASSERT_EQ(run_cli("run " + config_dir() + "/linear_smoke.cfg --out " + out_a +
                    " --threads 1"),
            0);
  ASSERT_EQ(run_cli("run " + config_dir() + "/linear_smoke.cfg --out " + out_b +
                    " --threads 8"),
            0);
  const std::string a = slurp(out_a);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(out_b));
}

}  // namespace
