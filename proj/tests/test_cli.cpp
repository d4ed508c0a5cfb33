#include "abclll/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace abclll {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::filesystem::path temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("abclll_cli_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove(p);
  return p;
}

TEST(CliVerify, Reyssat) {
  const CliRun r = run({"verify", "2", "3^10*109", "23^5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "A + B = C holds"));
  EXPECT_TRUE(has(r.out, "P: 1.629911684"));
  EXPECT_TRUE(has(r.out, "rho: 3.331886533"));
  EXPECT_TRUE(has(r.out, "rad: 2*3*23*109 = 15042"));
  EXPECT_TRUE(has(r.out, "good ABC triple (P > 1.4): yes"));
  EXPECT_TRUE(has(r.out, "good Szpiro triple (rho > 4): no"));
}

TEST(CliVerify, Nitaj) {
  const CliRun r = run({"verify", "13*19^6", "2^30*5", "3^13*11^2*31"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "rho: 4.419014048"));
  EXPECT_TRUE(has(r.out, "good Szpiro triple (rho > 4): yes"));
}

TEST(CliVerify, FailuresAndGcd) {
  const CliRun bad = run({"verify", "1", "1", "3"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(has(bad.out, "FAILED"));

  const CliRun common = run({"verify", "2", "2^4", "2*3^2"});
  EXPECT_EQ(common.code, 0);
  EXPECT_TRUE(has(common.out, "coprime: no"));
  const CliRun reduced = run({"verify", "--reduce-gcd", "2", "2^4", "2*3^2"});
  EXPECT_EQ(reduced.code, 0);
  EXPECT_TRUE(has(reduced.out, "reduced by common factor 2: 1 + 2^3 = 3^2"));
  EXPECT_TRUE(has(reduced.out, "coprime: yes"));

  const CliRun unit = run({"verify", "1", "1", "1"});
  EXPECT_EQ(unit.code, 1);
  EXPECT_TRUE(has(unit.out, "P: undefined"));
}

TEST(CliVerify, UsageErrors) {
  EXPECT_EQ(run({"verify", "2", "3"}).code, 2);
  EXPECT_EQ(run({"verify", "2", "3^", "5"}).code, 2);
  EXPECT_EQ(run({"verify", "2", "-3", "5"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliReduce, WorkedExample) {
  const CliRun r = run({"reduce", "1", "3^4", "5^4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "v1 = (23, -8, 1)"));
  EXPECT_TRUE(has(r.out, "v2 = (12, 23, -3)"));
  EXPECT_TRUE(has(r.out, "gram determinant: 397187"));
  EXPECT_TRUE(has(r.out, "full kernel"));
  EXPECT_TRUE(has(r.out, "(1, 54, -7)  1+2*3^7=5^4*7"));
  EXPECT_TRUE(has(r.out, "(104, -9, 1)  2^3*13+5^4=3^6"));
}

TEST(CliReduce, LargeBaseContainsRelation) {
  const CliRun r = run({"reduce", "71^8", "2^5*5^18*17^3", "3^38"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "(12649337, 336633577, -149459713)"));
  EXPECT_TRUE(has(r.out, "P=1.414570785 rho=4.007475924"));
}

TEST(CliReduce, OptionsAndErrors) {
  const CliRun tiny = run({"reduce", "--cf-depth", "0", "--box", "0", "1", "3^4", "5^4"});
  EXPECT_EQ(tiny.code, 0);
  EXPECT_TRUE(has(tiny.out, "candidates: 2"));
  EXPECT_EQ(run({"reduce", "1", "1", "2"}).code, 2);
  EXPECT_EQ(run({"reduce", "--box", "-1", "1", "2", "3"}).code, 2);
  EXPECT_EQ(run({"reduce", "--box", "5000", "1", "2", "3"}).code, 2);
  EXPECT_EQ(run({"reduce", "--cf-depth", "many", "1", "2", "3"}).code, 2);
}

TEST(CliSearch, SmallRunWritesJsonl) {
  const auto path = temp_path("search");
  const CliRun r = run({"search", "--max-value", "1e5", "--prime-bound", "12", "--include-one", "--p-threshold",
                     "1.2", "--rho-threshold", "3.5", "--box", "4", "--workers", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.out, "bases examined: 12341"));
  EXPECT_TRUE(has(r.out, "records appended to " + path.string()));
  EXPECT_TRUE(has(r.err, "12341 / 12341 bases (100%)"));

  std::ifstream in(path);
  std::string header, line;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_TRUE(has(header, "\"mode\":\"prime-powers\""));
  EXPECT_TRUE(has(header, "\"max_value\":\"100000\""));
  EXPECT_TRUE(has(header, "\"workers\":2"));
  std::size_t records = 0;
  while (std::getline(in, line)) {
    EXPECT_NO_THROW(record_from_jsonl(line));
    ++records;
  }
  EXPECT_TRUE(has(r.out, "records: " + std::to_string(records) + "\n"));
  EXPECT_GT(records, 0u);
  std::filesystem::remove(path);
}

TEST(CliSearch, HighThresholdsGiveNoRecords) {
  const auto path = temp_path("high");
  const CliRun r = run({"search", "--max-value", "1e4", "--prime-bound", "1.2e1", "--p-threshold", "99",
                        "--rho-threshold", "9.9e1", "--workers", "1", "--out", path.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.out, "records: 0\n"));
  EXPECT_FALSE(has(r.out, "bases examined: 0\n"));
  std::filesystem::remove(path);
}

TEST(CliSearch, FlagErrors) {
  EXPECT_EQ(run({"search", "--max-value", "1.5", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--max-value", "-5", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--max-value", "1", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--mode", "primes", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--workers", "0", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--p-threshold", "high", "--out", "/dev/null"}).code, 2);
  EXPECT_EQ(run({"search", "--max-value", "1e12", "--prime-bound", "1000", "--mode", "smooth", "--out", "/dev/null"})
                .code,
            2);
}

TEST(CliSearch, UnwritableOutput) {
  const CliRun r = run({"search", "--max-value", "100", "--prime-bound", "5", "--out", "/nonexistent_dir_abclll/x.jsonl"});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(has(r.err, "cannot write output file"));
}

TEST(CliTables, ShippedFixture) {
  const CliRun r = run({"tables", "--fixture", std::string(ABCLLL_SOURCE_DIR) + "/data/published_tables.tsv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "rows: 89 (szpiro 48, abc 41), passed: 89"));
  EXPECT_FALSE(has(r.out, "FAIL"));
}

TEST(CliTables, FailingEmptyAndMissing) {
  const auto bad = temp_path("bad.tsv");
  std::ofstream(bad) << "abc\t2\t3^10*109\t6436342\t1.62991168\t6.8\n";
  const CliRun failing = run({"tables", "--fixture", bad.string()});
  EXPECT_EQ(failing.code, 1);
  EXPECT_TRUE(has(failing.out, "sum-mismatch"));

  const auto empty = temp_path("empty.tsv");
  std::ofstream(empty) << "# nothing\n";
  const CliRun none = run({"tables", "--fixture", empty.string()});
  EXPECT_EQ(none.code, 0);
  EXPECT_TRUE(has(none.err, "warning"));

  const auto broken = temp_path("broken.tsv");
  std::ofstream(broken) << "abc\t2\n";
  const CliRun parse = run({"tables", "--fixture", broken.string()});
  EXPECT_EQ(parse.code, 2);
  EXPECT_TRUE(has(parse.err, "row 1"));

  EXPECT_EQ(run({"tables", "--fixture", "/nonexistent/fixture.tsv"}).code, 2);
  for (const auto& p : {bad, empty, broken}) std::filesystem::remove(p);
}

TEST(CliEstimate, ValuesAndErrors) {
  const CliRun r = run({"estimate", "--size", "1e20", "--primes", "2,3,5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r.out, "worst-case P estimate: 0.9392956711"));
  EXPECT_EQ(run({"estimate", "--size", "1e20", "--primes", "2,3"}).code, 2);
  EXPECT_EQ(run({"estimate", "--size", "1", "--primes", "2,3,5"}).code, 2);
  EXPECT_EQ(run({"estimate", "--primes", "2,3,5"}).code, 2);
}

TEST(CliHelpers, ParseCount) {
  EXPECT_EQ(cli::parse_count("10000000", "--x"), 10000000);
  EXPECT_EQ(cli::parse_count("1e7", "--x"), 10000000);
  EXPECT_EQ(cli::parse_count("1.5e3", "--x"), 1500);
  EXPECT_EQ(cli::parse_count("123456789012345678901234567890", "--x"), Int("123456789012345678901234567890"));
  EXPECT_THROW(cli::parse_count("1e-3", "--x"), CLI::ValidationError);
  EXPECT_THROW(cli::parse_count("", "--x"), CLI::ValidationError);
  EXPECT_THROW(cli::parse_count("7x", "--x"), CLI::ValidationError);
  EXPECT_THROW(cli::parse_u64("1e30", "--x"), CLI::ValidationError);
}

}  // namespace
}  // namespace abclll
