#include "fairfaucet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace fs = std::filesystem;
using fairfaucet::cli::run;
namespace cli = fairfaucet::cli;

namespace {

const fs::path kGolden = FAIRFAUCET_GOLDEN_DIR;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fairfaucet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int call(std::vector<std::string> args) {
        out_.str({});
        err_.str({});
        return run(args, out_, err_);
    }

    void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, RunReproducesGoldenFilesByteForByte) {
    for (const char* name : {"cmf_table", "amf_table"}) {
        const fs::path fixture = kGolden / name;
        const fs::path out = dir_ / name;
        ASSERT_EQ(call({"run", "--scenario", (fixture / "scenario.json").string(), "--out", out.string()}), cli::kExitOk)
            << err_.str();
        std::size_t compared = 0;
        for (const auto& entry : fs::directory_iterator(fixture)) {
            if (entry.path().extension() != ".csv") continue;
            EXPECT_EQ(slurp(out / entry.path().filename()), slurp(entry.path())) << name << "/" << entry.path().filename();
            ++compared;
        }
        EXPECT_GE(compared, 3u);
    }
}

TEST_F(CliTest, GoldenCommandMatchesCommittedFixtures) {
    ASSERT_EQ(call({"golden", "--out", dir_.string() + "/g"}), cli::kExitOk);
    for (const auto& entry : fs::recursive_directory_iterator(kGolden)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), kGolden);
        EXPECT_EQ(slurp(dir_ / "g" / rel), slurp(entry.path())) << rel;
    }
}

TEST_F(CliTest, GoldenRefusesOverwriteWithoutForce) {
    const std::string out = (dir_ / "g").string();
    ASSERT_EQ(call({"golden", "--out", out}), cli::kExitOk);
    EXPECT_EQ(call({"golden", "--out", out}), cli::kExitUsage);
    EXPECT_EQ(call({"golden", "--out", out, "--force"}), cli::kExitOk);
}

TEST_F(CliTest, RunTwiceIsIdentical) {
    const auto scenario = (kGolden / "amf_table" / "scenario.json").string();
    write(dir_ / "sc.json", R"({"variant": "wamf", "n": 12, "seed": 5})");
    for (const auto& sc : {scenario, (dir_ / "sc.json").string()}) {
        ASSERT_EQ(call({"run", "--scenario", sc, "--out", (dir_ / "a").string()}), cli::kExitOk);
        ASSERT_EQ(call({"run", "--scenario", sc, "--out", (dir_ / "b").string()}), cli::kExitOk);
        EXPECT_EQ(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
        EXPECT_EQ(slurp(dir_ / "a" / "balances.csv"), slurp(dir_ / "b" / "balances.csv"));
    }
}

TEST_F(CliTest, SeedOverrideChangesOutput) {
    write(dir_ / "sc.json", R"({"variant": "amf", "n": 12, "seed": 5})");
    const auto sc = (dir_ / "sc.json").string();
    ASSERT_EQ(call({"run", "--scenario", sc, "--out", (dir_ / "a").string()}), cli::kExitOk);
    ASSERT_EQ(call({"run", "--scenario", sc, "--seed", "6", "--out", (dir_ / "b").string()}), cli::kExitOk);
    EXPECT_NE(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
}

TEST_F(CliTest, MissingOrInvalidScenario) {
    EXPECT_EQ(call({"run", "--scenario", (dir_ / "missing.json").string(), "--out", dir_.string()}), cli::kExitUsage);
    EXPECT_FALSE(err_.str().empty());
    write(dir_ / "bad.json", R"({"variant": "amf", "n": 0})");
    EXPECT_EQ(call({"verify", "--scenario", (dir_ / "bad.json").string()}), cli::kExitUsage);
    EXPECT_EQ(call({"no-such-command"}), cli::kExitUsage);
    EXPECT_EQ(call({}), cli::kExitUsage);
}

TEST_F(CliTest, VerifyExitCodes) {
    const auto scenario = (kGolden / "amf_table" / "scenario.json").string();
    EXPECT_EQ(call({"verify", "--scenario", scenario}), cli::kExitOk) << err_.str();
    EXPECT_EQ(call({"verify", "--scenario", scenario, "--inject-fault"}), cli::kExitMismatch);
    EXPECT_NE((out_.str() + err_.str()).find("epoch"), std::string::npos);
}

TEST_F(CliTest, VerifyReportsFcfsOnDepletion) {
    write(dir_ / "tight.json", R"({"variant": "amf", "n": 10, "seed": 4, "epoch_capacity": 25})");
    EXPECT_EQ(call({"verify", "--scenario", (dir_ / "tight.json").string()}), cli::kExitOk) << err_.str();
    EXPECT_NE(out_.str().find("first-come-first-served"), std::string::npos) << out_.str();
}

TEST_F(CliTest, CostReportWritesTable) {
    write(dir_ / "sc.json", R"({"variant": "amf", "n": 10, "seed": 1})");
    ASSERT_EQ(call({"cost-report", "--scenario", (dir_ / "sc.json").string(), "--sweep", "n=10,20", "--out",
                    dir_.string()}),
              cli::kExitOk)
        << err_.str();
    const auto csv = slurp(dir_ / "cost_report.csv");
    EXPECT_EQ(csv.rfind("variant,action,n,round,count,total,mean\n", 0), 0u);
    EXPECT_NE(csv.find("AMF,claim,20,3,"), std::string::npos);
    EXPECT_NE(out_.str().find("scaling:"), std::string::npos);
}

TEST_F(CliTest, HelpIsSuccess) {
    EXPECT_EQ(call({"--help"}), cli::kExitOk);
    EXPECT_NE(out_.str().find("verify"), std::string::npos);
}
