#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "panelscope/cli.hpp"
#include "panelscope/csv.hpp"
#include "support.hpp"

using namespace panelscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "panelscope");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> base(std::vector<std::string> tail) {
  std::vector<std::string> args{"--input", testkit::fixture_path(), "--key", "country",
                                "--index", "year"};
  args.insert(args.end(), tail.begin(), tail.end());
  return args;
}

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "panelscope_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

void expect_single_error_line(const Outcome& o) {
  EXPECT_EQ(o.err.rfind("error: ", 0), 0u) << o.err;
  EXPECT_EQ(line_count(o.err), 1u) << o.err;
}

}  // namespace

TEST(Cli, SummaryPrintsRegularAndIndexSummary) {
  const auto o = run_cli(base({"--min-obs", "5", "summary"}));
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("regular=true"), std::string::npos);
  EXPECT_NE(o.out.find("index_summary=1710,1782.5,1855,1855,1927.5,2000"), std::string::npos);
  EXPECT_EQ(line_count(o.out), 1u);
}

TEST(Cli, SummaryWritesTally) {
  const auto path = temp_file("tally.csv");
  const auto o = run_cli(base({"summary", "--output", path.string()}));
  ASSERT_EQ(o.code, 0) << o.err;
  const auto text = read_text(path);
  EXPECT_EQ(text.substr(0, 13), "n_obs,n_keys\n");
  EXPECT_NE(text.find("\n5,11\n"), std::string::npos);
  EXPECT_NE(text.find("\n7,13\n"), std::string::npos);
}

TEST(Cli, FeaturesFiveNum) {
  const auto o = run_cli(base({"features", "--var", "height_cm", "--set", "five_num", "--min-obs", "5"}));
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(line_count(o.out), 120u);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "country,min,q25,med,q75,max");
}

TEST(Cli, FeaturesFilterJoin) {
  const auto inc = run_cli(base({"--min-obs", "5", "features", "--var", "height_cm", "--set",
                                 "monotonic", "--filter", "increase == true", "--join"}));
  EXPECT_EQ(inc.code, 0) << inc.err;
  EXPECT_EQ(line_count(inc.out), 23u);
  EXPECT_NE(inc.out.find("\nHonduras,"), std::string::npos);
  EXPECT_NE(inc.out.find("\nMoldova,"), std::string::npos);

  const auto top = run_cli(base({"features", "--var", "height_cm", "--feature", "max", "--filter",
                                 "max == max(max)", "--join"}));
  EXPECT_EQ(top.code, 0) << top.err;
  EXPECT_EQ(line_count(top.out), 17u);
  EXPECT_NE(top.out.find("\nDenmark,"), std::string::npos);
}

TEST(Cli, SlopeThenNearOnOneKey) {
  const auto input = temp_file("one_key.csv");
  write_text(input, "id,t,y\nA,0,1\nA,1,3\nA,2,4\n");
  const auto fitted = temp_file("fitted.csv");
  const auto s = run_cli({"--input", input.string(), "--key", "id", "--index", "t", "slope",
                          "--response", "y", "--output", fitted.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto n = run_cli({"--input", fitted.string(), "--key", "id", "--index", "t", "near",
                          "--var", "rss"});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(line_count(n.out), 6u);
  std::istringstream lines(n.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "id,rss,stat,stat_value,stat_diff");
  while (std::getline(lines, line)) {
    EXPECT_EQ(line.rfind("A,", 0), 0u);
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
  }
}

TEST(Cli, SlopePerKeyAndTop) {
  const auto fitted = temp_file("heights_fit.csv");
  ASSERT_EQ(run_cli(base({"--min-obs", "5", "-o", fitted.string(), "slope", "--response",
                          "height_cm", "--center"}))
                .code,
            0);
  const auto top = run_cli({"--input", fitted.string(), "--key", "country", "--index", "year",
                            "near", "--var", "rss", "--top", "-3"});
  EXPECT_EQ(top.code, 0) << top.err;
  EXPECT_GE(line_count(top.out), 4u);
  const auto per_key = run_cli(base({"slope", "--response", "height_cm", "--per-key"}));
  EXPECT_EQ(per_key.code, 0);
  EXPECT_EQ(per_key.out.substr(0, per_key.out.find('\n')), "country,intercept,slope");
}

TEST(Cli, SampleAndStrataAreSeeded) {
  const auto a = run_cli(base({"sample", "--seed", "11"}));
  const auto b = run_cli(base({"sample", "--seed", "11"}));
  const auto c = run_cli(base({"sample", "--seed", "12"}));
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(line_count(a.out), 37u);

  const auto s = run_cli(base({"--min-obs", "5", "strata", "--along", "year", "--n-strata", "12"}));
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(line_count(s.out), 120u);
  const auto sz = run_cli(base({"sample", "--size", "12"}));
  EXPECT_EQ(sz.code, 0);
  EXPECT_EQ(run_cli(base({"sample", "--frac", "0.1", "--min-obs", "5"})).code, 0);
}

TEST(Cli, PlotModes) {
  const auto facet = run_cli(base({"--min-obs", "5", "plot", "--y", "height_cm"}));
  EXPECT_EQ(facet.code, 0) << facet.err;
  EXPECT_EQ(facet.out.rfind("<?xml", 0), 0u);
  const auto alloc_path = temp_file("alloc.csv");
  ASSERT_EQ(run_cli(base({"--min-obs", "5", "strata", "-o", alloc_path.string()})).code, 0);
  const auto from_file = run_cli(base({"--min-obs", "5", "plot", "--y", "height_cm",
                                       "--allocation", alloc_path.string(), "--breaks", "1750",
                                       "1850", "1950"}));
  EXPECT_EQ(from_file.code, 0) << from_file.err;
}

TEST(Cli, UsageErrorsExitTwoAndNameTheFlag) {
  const auto missing = run_cli({"summary", "--input", testkit::fixture_path(), "--key", "country"});
  EXPECT_EQ(missing.code, 2);
  expect_single_error_line(missing);
  EXPECT_NE(missing.err.find("--index"), std::string::npos);

  const auto var = run_cli(base({"features", "--var", "weight"}));
  EXPECT_EQ(var.code, 2);
  expect_single_error_line(var);
  EXPECT_NE(var.err.find("--var"), std::string::npos);

  const auto size = run_cli(base({"sample", "--size", "500"}));
  EXPECT_EQ(size.code, 2);
  EXPECT_NE(size.err.find("--size"), std::string::npos);

  const auto set = run_cli(base({"features", "--var", "height_cm", "--set", "bogus"}));
  EXPECT_EQ(set.code, 2);
  EXPECT_NE(set.err.find("--set"), std::string::npos);

  const auto filter = run_cli(base({"features", "--var", "height_cm", "--filter", "max ~ 3"}));
  EXPECT_EQ(filter.code, 2);
  EXPECT_NE(filter.err.find("--filter"), std::string::npos);

  const auto strata = run_cli(base({"strata", "--n-strata", "1000"}));
  EXPECT_EQ(strata.code, 2);
  EXPECT_NE(strata.err.find("--n-strata"), std::string::npos);

  const auto near = run_cli(base({"near", "--var", "height_cm"}));
  EXPECT_EQ(near.code, 2);
  EXPECT_NE(near.err.find("--var"), std::string::npos);

  const auto nofile = run_cli({"--input", "/no/such.csv", "--key", "k", "--index", "i", "summary"});
  EXPECT_EQ(nofile.code, 2);
  EXPECT_NE(nofile.err.find("--input"), std::string::npos);

  const auto key = run_cli({"--input", testkit::fixture_path(), "--key", "nation", "--index",
                            "year", "summary"});
  EXPECT_EQ(key.code, 2);
  expect_single_error_line(key);
  EXPECT_NE(key.err.find("--key"), std::string::npos);

  const auto index = run_cli({"--input", testkit::fixture_path(), "--key", "country", "--index",
                              "continent", "summary"});
  EXPECT_EQ(index.code, 2);
  expect_single_error_line(index);
  EXPECT_NE(index.err.find("--index"), std::string::npos);

  EXPECT_EQ(run_cli(base({})).code, 2);
}

TEST(Cli, DataErrorsExitOne) {
  const auto dup = temp_file("dup.csv");
  write_text(dup, "id,t,y\nA,1,1\nB,1,2\nA,1,3\n");
  const auto o = run_cli({"--input", dup.string(), "--key", "id", "--index", "t", "summary"});
  EXPECT_EQ(o.code, 1);
  expect_single_error_line(o);
  EXPECT_NE(o.err.find("DuplicateKeyIndex"), std::string::npos);
  EXPECT_NE(o.err.find("line 4"), std::string::npos);
  EXPECT_NE(o.err.find("'A'"), std::string::npos);

  const auto empty = temp_file("empty.csv");
  write_text(empty, "id,t,y\n");
  const auto e = run_cli({"--input", empty.string(), "--key", "id", "--index", "t", "summary"});
  EXPECT_EQ(e.code, 1);
  expect_single_error_line(e);
  EXPECT_NE(e.err.find("EmptyTable"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"panelscope", "--help"}, out, err), 0);
  EXPECT_NE(out.str().find("strata"), std::string::npos);
}

// Separate processes: the same invocation and seed give byte-identical files.
TEST(CliBinary, ByteIdenticalAcrossProcesses) {
  const std::string bin = PANELSCOPE_CLI_BINARY;
  const auto first = temp_file("run1.csv");
  const auto second = temp_file("run2.csv");
  const auto svg1 = temp_file("run1.svg");
  const auto svg2 = temp_file("run2.svg");
  auto cmd = [&](const std::string& sub, const fs::path& out) {
    return "\"" + bin + "\" --input \"" + testkit::fixture_path() +
           "\" --key country --index year --min-obs 5 --seed 77 --output \"" + out.string() +
           "\" " + sub + " > /dev/null";
  };
  ASSERT_EQ(std::system(cmd("sample", first).c_str()), 0);
  ASSERT_EQ(std::system(cmd("sample", second).c_str()), 0);
  EXPECT_EQ(read_text(first), read_text(second));
  ASSERT_EQ(std::system(cmd("plot --y height_cm", svg1).c_str()), 0);
  ASSERT_EQ(std::system(cmd("plot --y height_cm", svg2).c_str()), 0);
  EXPECT_EQ(read_text(svg1), read_text(svg2));
}

TEST(CliBinary, SeedFromEnvironment) {
  const std::string bin = PANELSCOPE_CLI_BINARY;
  const auto env_out = temp_file("env.csv");
  const auto flag_out = temp_file("flag.csv");
  const std::string common = "\"" + bin + "\" --input \"" + testkit::fixture_path() +
                             "\" --key country --index year";
  ASSERT_EQ(std::system(("PANELSCOPE_SEED=4242 " + common + " -o \"" + env_out.string() +
                         "\" sample > /dev/null")
                            .c_str()),
            0);
  ASSERT_EQ(std::system((common + " --seed 4242 -o \"" + flag_out.string() + "\" sample > /dev/null")
                            .c_str()),
            0);
  EXPECT_EQ(read_text(env_out), read_text(flag_out));
}

TEST(CliBinary, ExitCodes) {
  const std::string bin = PANELSCOPE_CLI_BINARY;
  const int usage = std::system(("\"" + bin + "\" summary 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(usage));
  EXPECT_EQ(WEXITSTATUS(usage), 2);
}
