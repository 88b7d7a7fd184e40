// Drives the built superfg binary and checks exit codes and report content.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    std::string cmd = std::string(SUPERFG_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Cli, IdentitySuiteExitsZero) {
    CliRun r = run("verify --suite identities");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("| OK"), std::string::npos);
}

TEST(Cli, UnknownScenarioExitsTwo) {
    EXPECT_EQ(run("scenario NO_SUCH").code, 2);
}

TEST(Cli, BadFlagsExitTwo) {
    EXPECT_EQ(run("--branch sideways scenario SUSY_J").code, 2);
    EXPECT_EQ(run("--format xml verify").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, ModelErrorsExitTwo) {
    EXPECT_EQ(run("--model /nonexistent/model verify").code, 2);
    std::string bad = temp_file("superfg_bad.model", "grading 2 1\nfield\nparam a even\nlet x = a^-1\n");
    EXPECT_EQ(run("--model " + bad + " list").code, 2);
}

TEST(Cli, MismatchExitsOne) {
    CliRun r = run("scenario ST_BOSONIC");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("ST_BOSONIC.g12  -- ST_BOSONIC g12 (model line"), std::string::npos);
}

TEST(Cli, JsonFormatAfterSubcommand) {
    CliRun r = run("scenario ST_BOSONIC --format json --seed 3");
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "scenario ST_BOSONIC");
    EXPECT_EQ(j["seed"], 3);
    bool g12 = false;
    for (const auto& rec : j["records"]) g12 = g12 || rec["id"] == "ST_BOSONIC.g12";
    EXPECT_TRUE(g12);
}

TEST(Cli, ReportsAreByteIdentical) {
    CliRun a = run("--seed 11 scenario GAUGE_FERMIONIC --format json");
    CliRun b = run("--seed 11 scenario GAUGE_FERMIONIC --format json");
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Cli, ListAndMinusBranch) {
    CliRun l = run("list");
    EXPECT_EQ(l.code, 0);
    EXPECT_EQ(l.out, "ST_BOSONIC\nTRANSLATION_X\nGAUGE_BOSONIC\nSUSY_J\nGAUGE_FERMIONIC\n");
    CliRun m = run("--branch minus scenario SUSY_J");
    EXPECT_EQ(m.code, 0);
    EXPECT_NE(m.out.find("branch minus"), std::string::npos);
}
