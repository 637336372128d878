#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "betti/cli/commands.hpp"
#include "betti/cli/run_config.hpp"
#include "betti/error.hpp"

namespace betti::cli {
namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "betti");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.ends_with(',')) {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class TempDir {
public:
    TempDir()
        : path_(std::filesystem::temp_directory_path() /
                ("betti-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name()))
    {
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

TEST(CliCurve, ThirtyTwoRowsWithOracle)
{
    const auto r = invoke({"curve", "--manifold", "circle", "--complex", "vr", "--invariant",
                           "betti1", "--n", "20", "--trials", "5000", "--t-min", "0.01", "--t-max",
                           "0.32", "--steps", "32", "--seed", "42"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("t,n,trials,mean,variance,stderr,oracle_p\n"), std::string::npos);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 32u);
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 7u);
        EXPECT_FALSE(row[6].empty());
        EXPECT_EQ(row[1], "20");
        EXPECT_EQ(row[2], "5000");
    }
    EXPECT_EQ(rows.front()[0], "0.01");
    EXPECT_EQ(rows.back()[0], "0.32");
}

TEST(CliCurve, SingleStep)
{
    const auto r = invoke({"curve", "--n", "6", "--trials", "50", "--t-min", "0.1", "--steps", "1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(csv_rows(r.out).size(), 1u);
}

TEST(CliCurve, OracleColumnGatedOutsideItsDomain)
{
    const auto r = invoke({"curve", "--manifold", "circle", "--complex", "vr", "--invariant",
                           "betti1", "--n", "8", "--trials", "100", "--t-min", "0.1", "--t-max",
                           "0.5", "--steps", "9"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const auto& row : csv_rows(r.out)) {
        const double t = std::stod(row[0]);
        EXPECT_EQ(row[6].empty(), t >= 1.0 / 3.0) << row[0];
    }
}

TEST(CliCurve, NoOracleForOtherInvariants)
{
    const auto r = invoke({"curve", "--invariant", "betti0", "--n", "5", "--trials", "20",
                           "--grid", "0.1,0.2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const auto& row : csv_rows(r.out)) {
        EXPECT_TRUE(row[6].empty());
    }
}

TEST(CliCurve, WritesPlotScriptNextToCsv)
{
    const TempDir dir;
    const auto csv = dir.path() / "curve.csv";
    const auto r = invoke({"curve", "--n", "6", "--trials", "40", "--grid", "0.1,0.2", "-o",
                           csv.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    ASSERT_TRUE(std::filesystem::exists(csv));
    const auto gp = dir.path() / "curve.gp";
    ASSERT_TRUE(std::filesystem::exists(gp));
    EXPECT_NE(read_file(gp).find("curve.csv"), std::string::npos);
}

TEST(CliCurve, EmbeddedConfigReproducesTheRun)
{
    const TempDir dir;
    const auto first = dir.path() / "a.csv";
    const auto second = dir.path() / "b.csv";
    ASSERT_EQ(invoke({"curve", "--n", "9", "--trials", "300", "--t-min", "0.05", "--t-max", "0.3",
                      "--steps", "6", "--seed", "77", "--workers", "3", "-o", first.string()})
                  .code,
              kExitOk);
    const auto rerun = invoke({"curve", "--from", first.string(), "--workers", "1", "-o",
                               second.string()});
    ASSERT_EQ(rerun.code, kExitOk) << rerun.err;
    EXPECT_EQ(csv_rows(read_file(first)), csv_rows(read_file(second)));
}

TEST(CliCurve, JsonMirrorsColumnsAndConfig)
{
    const TempDir dir;
    const auto path = dir.path() / "c.json";
    ASSERT_EQ(invoke({"curve", "--n", "7", "--trials", "100", "--grid", "0.1,0.2,0.4", "--format",
                      "json", "-o", path.string()})
                  .code,
              kExitOk);
    const auto j = nlohmann::json::parse(read_file(path));
    EXPECT_EQ(j["format_version"], kFormatVersion);
    EXPECT_EQ(j["columns"]["t"].size(), 3u);
    EXPECT_TRUE(j["columns"]["oracle_p"][2].is_null());
    EXPECT_TRUE(j["columns"]["oracle_p"][0].is_number());

    const RunConfig config = RunConfig::from_json(j["config"]);
    EXPECT_EQ(config.to_json(), j["config"]);
    EXPECT_EQ(config.n, 7u);

    const auto loaded = load_embedded_config(path.string());
    EXPECT_EQ(loaded.to_json(), j["config"]);
}

TEST(CliCurve, UsageErrorsExitTwo)
{
    EXPECT_EQ(invoke({"curve", "--n", "5", "--trials", "1", "--grid", "0.1"}).code, kExitUsage);
    EXPECT_EQ(invoke({"curve", "--n", "5", "--trials", "10", "--grid", "0.2,0.1"}).code,
              kExitUsage);
    EXPECT_EQ(invoke({"curve", "--manifold", "klein"}).code, kExitUsage);
    EXPECT_EQ(invoke({"curve", "--complex", "alpha"}).code, kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
}

TEST(CliCurve, ResourceLimitExitsThree)
{
    const auto r = invoke({"curve", "--n", "40", "--trials", "2", "--invariant", "euler",
                           "--grid", "0.5"});
    EXPECT_EQ(r.code, kExitResource);
    EXPECT_FALSE(r.err.empty());
}

TEST(CliOracle, TwoPointsGiveZeros)
{
    const auto r = invoke({"oracle", "--n", "2", "--t-min", "0.01", "--t-max", "0.3", "--steps",
                           "7"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("r,n,p,expected_b1,variance_b1\n"), std::string::npos);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 7u);
    for (const auto& row : rows) {
        EXPECT_EQ(row[2], "0");
    }
}

TEST(CliOracle, DenseSample)
{
    const auto r = invoke({"oracle", "--n", "100", "--grid", "0.1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_GE(std::stod(csv_rows(r.out).at(0).at(2)), 0.99);
}

TEST(CliOracle, GridOutsideDomainNamesTheValue)
{
    const auto r = invoke({"oracle", "--n", "5", "--grid", "0.1,0.4"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("0.4"), std::string::npos) << r.err;
}

TEST(CliConverge, TableAgainstReference)
{
    const auto r = invoke({"converge", "--t", "0.1", "--n-values", "10,40", "--trials", "200"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("n,t,trials,mean,variance,stderr,target,abs_error\n"), std::string::npos);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][6], "1");
    EXPECT_EQ(invoke({"converge", "--t", "0.1", "--trials", "200"}).code, kExitUsage);
}

TEST(CliSelftest, RefusesTooFewTrials)
{
    const auto r = invoke({"selftest", "--trials", "50"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("1000"), std::string::npos);
}

TEST(CliSelftest, PassesOnACorrectBuild)
{
    const auto r = invoke({"selftest", "--trials", "1000"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    EXPECT_NE(r.out.find("PASS interleaving"), std::string::npos);
}

TEST(CliSelftest, InterleavingHoldsOnAFixedSample)
{
    EXPECT_FALSE(interleaving_violation(PointSample::circle({0.0, 0.2, 0.5, 0.7})).has_value());
}

TEST(Format, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(0.0), "0");
    for (double x : {1.0 / 3.0, 2.0 / 7.0, 1e-300, 123456.789}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(Grid, Expansion)
{
    GridSpec g;
    g.t_min = 0.1;
    g.t_max = 0.3;
    g.steps = 3;
    const auto grid = g.expand();
    ASSERT_EQ(grid.size(), 3u);
    EXPECT_DOUBLE_EQ(grid[1], 0.2);
    EXPECT_EQ(grid[2], 0.3);

    g.steps = 0;
    EXPECT_THROW(g.expand(), InvalidArgument);
    g.steps = 2;
    g.t_min = -0.1;
    EXPECT_THROW(g.expand(), InvalidArgument);
}

TEST(Workers, EnvironmentDefaultAndFlagOverride)
{
    ::setenv("BETTI_WORKERS", "2", 1);
    EXPECT_EQ(invoke({"curve", "--n", "5", "--trials", "20", "--grid", "0.1"}).code, kExitOk);
    ::setenv("BETTI_WORKERS", "not-a-number", 1);
    EXPECT_EQ(invoke({"curve", "--n", "5", "--trials", "20", "--grid", "0.1"}).code, kExitUsage);
    EXPECT_EQ(invoke({"curve", "--n", "5", "--trials", "20", "--grid", "0.1", "--workers", "1"})
                  .code,
              kExitOk);
    ::unsetenv("BETTI_WORKERS");
}

} // namespace
} // namespace betti::cli
