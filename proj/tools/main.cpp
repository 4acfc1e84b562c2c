#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraclayer/fraclayer.h"

namespace {

int exit_for(fl_status st) {
    std::fprintf(stderr, "fraclayer: %s\n", fl_last_error());
    return st == FL_ERR_CONFIG ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> commands;
    for (size_t i = 0; i < fl_command_count(); ++i) commands.emplace_back(fl_command_name(i));
    std::vector<std::string> presets;
    for (size_t i = 0; i < fl_preset_count(); ++i) presets.emplace_back(fl_preset_name(i));

    CLI::App app{"fractional layer solutions: operators, energies, extensions, symmetry"};
    app.set_version_flag("--version", std::string(fl_version()));
    std::string command, config_path, out_dir = "out", preset = "pn-half";
    std::vector<std::string> overrides;
    int threads = 1;
    app.add_option("command", command, "subcommand")->required()->check(CLI::IsMember(commands));
    app.add_option("--config", config_path, "key = value file merged over the preset");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--preset", preset, "base preset")->check(CLI::IsMember(presets));
    app.add_option("--set", overrides, "key=json override, repeatable");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (fl_set_threads(threads) != FL_OK) return exit_for(FL_ERR_CONFIG);
    fl_config* cfg = nullptr;
    fl_status st = fl_config_preset(preset.c_str(), &cfg);
    if (st != FL_OK) return exit_for(st);
    if (!config_path.empty()) st = fl_config_load(cfg, config_path.c_str());
    for (const std::string& o : overrides) {
        if (st != FL_OK) break;
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            fl_config_free(cfg);
            std::fprintf(stderr, "fraclayer: --set expects key=value, got '%s'\n", o.c_str());
            return 3;
        }
        st = fl_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str());
    }
    int code = 2;
    if (st == FL_OK) st = fl_run_command(cfg, command.c_str(), out_dir.c_str(), &code);
    fl_config_free(cfg);
    if (st != FL_OK) return exit_for(st);
    std::printf("%s: %s (exit %d)\n", command.c_str(), code == 0 ? "all contracts met" : "contract violation", code);
    return code;
}
