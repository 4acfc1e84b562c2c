#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fraclayer/config.hpp"
#include "fraclayer/errors.hpp"

using namespace fraclayer;

namespace fs = std::filesystem;

TEST(Config, PresetsBuildAndValidate) {
    const auto names = Config::preset_names();
    for (const char* want : {"pn-half", "quartic-mix", "quartic-lowS", "quartic-withLap", "quartic-highS"})
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    for (const std::string& n : names) {
        const Config c = Config::preset(n);
        EXPECT_NO_THROW(c.validate()) << n;
        EXPECT_NEAR(c.measure().s_star(), n == "pn-half" ? 0.5 : (n == "quartic-highS" ? 0.75 : 0.3), 1e-15);
    }
    EXPECT_EQ(Config::preset("quartic-withLap").measure().lap_mass(), 0.2);
    EXPECT_THROW(Config::preset("nope"), ConfigError);
}

TEST(Config, PresetFilesMirrorBuiltins) {
    const fs::path dir = fs::path(FRACLAYER_SOURCE_DIR) / "presets";
    for (const std::string& n : Config::preset_names()) {
        Config c = Config::defaults();
        c.merge_file((dir / (n + ".conf")).string());
        EXPECT_EQ(c.dump(), Config::preset(n).dump()) << n;
    }
    Config all = Config::defaults();
    all.merge_file((dir / "defaults.conf").string());
    EXPECT_EQ(all.dump(), Config::defaults().dump());
}

TEST(Config, TextSyntax) {
    Config c = Config::defaults();
    c.merge_text("# comment\n\nsolver.tol = 1e-7   # trailing\nmeasure.atoms = [[0.4, 0.25], [0.6, 0.75]]\n");
    EXPECT_EQ(c.number("solver.tol"), 1e-7);
    EXPECT_EQ(c.measure().atoms().size(), 2u);
    EXPECT_THROW(c.merge_text("solver.tol 1e-7"), ConfigError);
    EXPECT_THROW(c.merge_text("solver.tolerance = 1"), ConfigError);
    EXPECT_THROW(c.merge_text("solver.tol = [1,"), ConfigError);
    EXPECT_THROW(c.merge_file("/nonexistent/file.conf"), ConfigError);
}

TEST(Config, TypedAccessors) {
    const Config c = Config::defaults();
    EXPECT_EQ(c.text("potential.kind"), "pn");
    EXPECT_EQ(c.count("solver.max_iters"), 20000u);
    EXPECT_EQ(c.numbers("solver.R_schedule"), (std::vector<double>{25, 50, 100}));
    EXPECT_THROW(c.number("potential.kind"), ConfigError);
    EXPECT_THROW(c.text("solver.tol"), ConfigError);
    EXPECT_THROW(c.number("missing.key"), ConfigError);
}

TEST(Config, RejectsInconsistentValues) {
    auto bad = [](const std::string& key, const std::string& value) {
        Config c = Config::defaults();
        c.set(key, value);
        EXPECT_THROW(c.validate(), ConfigError) << key << " = " << value;
    };
    bad("measure.atoms", "[[0.5, 0.7]]");
    bad("measure.atoms", "[[0.99, 1.0]]");
    bad("measure.atoms", "[[0.5]]");
    bad("measure.lap_mass", "0.5");
    bad("potential.kind", "\"sextic\"");
    bad("potential.kind", "\"polynomial\"");
    bad("solver.tol", "-1");
    bad("solver.delta_schedule", "[0.0, 0.1]");
    bad("energy.R_list", "[4, 8, 500]");
    bad("operator.n", "100");
    bad("extend.R_list", "[4, 80]");
    bad("symmetry.n", "200");
    bad("symmetry.R_list", "[1, 2, 40]");
    bad("symmetry.growth_F", "\"cubic\"");
    bad("seed", "-3");
}

TEST(Config, PolynomialPotential) {
    Config c = Config::defaults();
    c.set("potential.kind", "\"polynomial\"");
    c.set("potential.coeffs", "[0.25, 0, -0.5, 0, 0.25]");
    EXPECT_NO_THROW(c.validate());
    c.set("potential.coeffs", "[0, 0, 1]");
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, DumpListsEveryKey) {
    const Config c = Config::defaults();
    const std::string d = c.dump();
    for (const auto& [k, v] : c.entries()) EXPECT_NE(d.find("\"" + k + "\""), std::string::npos) << k;
}
