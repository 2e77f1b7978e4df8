#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace rootsim {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "rootsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return (fs::path(ROOTSIM_SCENARIO_DIR) / name).string(); }

fs::path fresh_dir(const char* name) {
    const fs::path d = fs::temp_directory_path() / ("rootsim_cli_test_" + std::string(name));
    fs::remove_all(d);
    return d;
}

TEST(Cli, RunWritesLogAndSvg) {
    const fs::path dir = fresh_dir("run");
    const Result r = run({"run", scenario("sim1.yaml"), "--out", dir.string(), "--svg"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "sim1.jsonl"));
    EXPECT_TRUE(fs::exists(dir / "sim1.svg"));
    EXPECT_NE(r.out.find("target_reached"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, RunHonorsOutDirEnvironment) {
    const fs::path dir = fresh_dir("env");
    ::setenv("ROOTSIM_OUT_DIR", dir.string().c_str(), 1);
    const Result r = run({"run", scenario("rigid_demo.yaml")});
    ::unsetenv("ROOTSIM_OUT_DIR");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "rigid_demo.jsonl"));
    fs::remove_all(dir);
}

TEST(Cli, Validate) {
    const Result r = run({"validate", scenario("sim1.yaml")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("sim1: ok"), std::string::npos);
}

TEST(Cli, MissingFile) {
    const Result r = run({"run", scenario("missing.yaml")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("missing.yaml"), std::string::npos);
}

TEST(Cli, BadConfigNamesField) {
    const fs::path dir = fresh_dir("bad");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.yaml") << "ds: -1\ninitial_curve: {line: {from: [0, 1], to: [0, 0]}}\n";
    const Result r = run({"validate", (dir / "bad.yaml").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("ds"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, UnknownFlagIsUsageError) {
    const Result r = run({"run", scenario("sim1.yaml"), "--bogus"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, Help) {
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("run"), std::string::npos);
}

TEST(Cli, Oracle) {
    const Result r = run({"oracle", scenario("sim1.yaml"), "--count", "4"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

}  // namespace
}  // namespace rootsim
