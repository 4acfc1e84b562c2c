#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FRACLAYER_CLI) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fraclayer_cli_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(Cli, OperatorCheckSucceeds) {
    const fs::path out = scratch("ok");
    EXPECT_EQ(run("operator-check --out " + out.string() + " --threads 2"), 0);
    EXPECT_TRUE(fs::exists(out / "operator_check.csv"));
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    fs::remove_all(out);
}

TEST(Cli, ConfigErrorsExitThree) {
    const fs::path out = scratch("bad");
    EXPECT_EQ(run("operator-check --out " + out.string() + " --set 'operator.s_list=[0.99]'"), 3);
    EXPECT_EQ(run("solve-layer --out " + out.string() + " --set 'measure.atoms=[[0.5,0.7]]'"), 3);
    EXPECT_EQ(run("solve-layer --out " + out.string() + " --config /nonexistent.conf"), 3);
    EXPECT_EQ(run("solve-layer --out " + out.string() + " --preset nothing"), 3);
    EXPECT_EQ(run("frobnicate"), 3);
    EXPECT_EQ(run("operator-check --threads 0"), 3);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ContractViolationExitsTwo) {
    const fs::path out = scratch("violation");
    EXPECT_EQ(run("solve-layer --out " + out.string() + " --set solver.max_iters=3"), 2);
    fs::remove_all(out);
}

TEST(Cli, ConfigFileAndPreset) {
    const fs::path out = scratch("file");
    const std::string conf = std::string(FRACLAYER_SOURCE_DIR) + "/presets/quartic-lowS.conf";
    EXPECT_EQ(run("solve-layer --preset pn-half --config " + conf + " --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "profile.csv"));
    fs::remove_all(out);
}
