#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = padicrot::cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
    CliResult r = run(args);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    return json::parse(r.out);
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("padicrot_test_" + name);
}

TEST(Cli, DocumentedExamples) {
    EXPECT_EQ(run({"so2", "mass", "--prime", "7", "--kappa", "1"}).out, "{\"value\":\"8/7\"}\n");
    EXPECT_EQ(run({"quat", "nrd", "--prime", "7", "--q", "1,1,0,0"}).out, "{\"value\":\"2\"}\n");
}

TEST(Cli, UnknownFlagIsAUsageError) {
    CliResult r = run({"so2", "mass", "--prime", "7", "--frobnicate"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(json::parse(r.out)["error"], "UsageError");
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--prime", "8", "so2", "mass"}).code, 2);
}

TEST(Cli, DomainErrorsExitWithOne) {
    CliResult r = run({"quat", "inv", "--prime", "5", "--q", "0,0,0,0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.out)["error"], "DivisionByZero");
    r = run({"padic", "sqrt", "--prime", "7", "--x", "3"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(r.out)["error"], "NotASquare");
    r = run({"haar", "mass", "--group", "so4", "--prime", "2"});
    EXPECT_EQ(json::parse(r.out)["error"], "ChartDomainExceeded");
}

TEST(Cli, MalformedJsonIsAUsageError) {
    CliResult r = run({"haar", "integrate-so3", "--prime", "3", "--cylinder", "{not json"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, ExactRationalsAreStrings) {
    json j = run_json({"haar", "mass", "--group", "so3", "--prime", "7"});
    EXPECT_EQ(j["value"], "16/7");
    j = run_json({"--normalized", "haar", "mass", "--group", "so3", "--prime", "7"});
    EXPECT_EQ(j["value"], "1");
    j = run_json({"haar", "integrate-so4", "--prime", "3", "--cylinder", "{\"fallback\":\"1\"}"});
    EXPECT_EQ(j["value"], "32/9");
    EXPECT_EQ(j["depth"], 1);
}

TEST(Cli, MonteCarloOutputShape) {
    json j = run_json({"haar", "integrate-so3", "--prime", "3", "--mode", "mc", "--samples", "3000", "--seed", "4",
                       "--cylinder", "{\"constraints\":[[0,0,1]]}"});
    EXPECT_TRUE(j.contains("estimate"));
    EXPECT_TRUE(j.contains("stderr"));
    EXPECT_EQ(j["samples"], 3000);
    EXPECT_EQ(j["seed"], 4);
}

TEST(Cli, CsvFormat) {
    CliResult r = run({"--format", "csv", "so2", "density", "--prime", "7", "--kappa", "1", "--alpha", "1/7"});
    EXPECT_EQ(r.out, "value\n1/49\n");
}

TEST(Cli, RotationsAndInvariance) {
    json j = run_json({"rot3", "from-quat", "--prime", "2", "--q", "1,1,0,0"});
    EXPECT_EQ(j["matrix"][1][2], "-1");
    j = run_json({"rot3", "check", "--prime", "7", "--m", "1,0,0,0,1,0,0,0,1"});
    EXPECT_TRUE(j["vanishes"]);
    j = run_json({"haar", "invariance", "--group", "so3", "--prime", "5", "--translations", "4", "--cylinder",
                  "{\"constraints\":[[2,2,1]]}"});
    EXPECT_TRUE(j["invariant"]);
    j = run_json({"haar", "covf", "--prime", "3", "--count", "3", "--depth", "2"});
    EXPECT_TRUE(j["all_equal"]);
}

TEST(Cli, ManifestReplayIsByteIdentical) {
    auto path = temp_path("manifest.json");
    std::vector<std::string> args = {"--seed", "17", "--manifest", path.string(), "haar", "integrate-so3", "--prime",
                                     "5", "--mode", "mc", "--samples", "5000", "--cylinder",
                                     "{\"constraints\":[[0,1,2]]}"};
    CliResult first = run(args);
    ASSERT_EQ(first.code, 0);
    std::ifstream in(path);
    json m = json::parse(in);
    EXPECT_EQ(m["seed"], 17);
    EXPECT_EQ(m["prime"], 5);
    EXPECT_EQ(m["samples"], 5000);
    EXPECT_EQ(m["depth"], 1);
    EXPECT_TRUE(m.contains("version"));
    EXPECT_TRUE(m.contains("wall_clock_seconds"));
    CliResult again = run({"replay", path.string()});
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(again.out, first.out);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"replay", path.string()}).code, 2);
}

// Each golden case stores an argument vector and the exact expected output.
TEST(Cli, GoldenFiles) {
    std::ifstream in(std::string(PADICROT_GOLDEN_DIR) + "/cases.json");
    ASSERT_TRUE(in.good());
    json cases = json::parse(in);
    ASSERT_FALSE(cases.empty());
    for (const auto& c : cases) {
        CliResult r = run(c["argv"].get<std::vector<std::string>>());
        EXPECT_EQ(r.code, c["exit"].get<int>()) << c["name"];
        EXPECT_EQ(r.out, c["stdout"].get<std::string>()) << c["name"];
    }
}

}  // namespace
