#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCmap = CMAP_PATH;
const std::string kDir = CMAP_WORKDIR;

int run(const std::string& args) {
  const std::string cmd = kCmap + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("examples"), 0);
  EXPECT_EQ(run("analyze --example ex1 --param a=0.5"), 2);
  EXPECT_EQ(run("analyze --example ex1 --window 1,0,0,1"), 2);
  EXPECT_EQ(run("analyze --f 'x*(' --g y"), 2);
  EXPECT_EQ(run("analyze --f x/b --g y"), 2);
  EXPECT_EQ(run("orbit --example ex3_T --start 1,0"), 3);
  EXPECT_EQ(run("orbit --example ex1 --start -1,1"), 3);
  EXPECT_EQ(run("orbit --example ex1 --start 1,1"), 0);
}

TEST(Cli, UnstableCurveOnAttractorFailsHypothesis) {
  EXPECT_EQ(run("curve --example ex1 --unstable --fp 0,0.5"), 4);
}

TEST(Cli, ConfigEchoReproducesOutput) {
  const std::string first = kDir + "/cli_curve_a.csv";
  const std::string second = kDir + "/cli_curve_b.csv";
  ASSERT_EQ(run("curve --example ex1 --columns 32 --out " + first), 0);
  ASSERT_EQ(run("curve --config " + first + " --out " + second), 0);
  const std::string a = slurp(first), b = slurp(second);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# cfg: verb=curve", 0), 0u);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const std::string cfg = kDir + "/cli_override.cfg";
  {
    std::ofstream out(cfg);
    out << "example=ex4\nnx=8\nny=8\nformat=csv\n";
  }
  const std::string a = kDir + "/cli_override_a.csv";
  const std::string b = kDir + "/cli_override_b.csv";
  ASSERT_EQ(run("basin --config " + cfg + " --out " + a), 0);
  ASSERT_EQ(run("basin --config " + cfg + " --nx 4 --out " + b), 0);
  EXPECT_NE(slurp(a).find("nx=8"), std::string::npos);
  EXPECT_NE(slurp(b).find("nx=4"), std::string::npos);
}

TEST(Cli, WorkerCountDoesNotChangeBytes) {
  const std::string base = "basin --example ex5 --nx 32 --ny 32 --out " + kDir + "/cli_w";
  ASSERT_EQ(run(base + "1.pgm --workers 1"), 0);
  ASSERT_EQ(run(base + "3.pgm --workers 3"), 0);
  EXPECT_EQ(slurp(kDir + "/cli_w1.pgm"), slurp(kDir + "/cli_w3.pgm"));
}
