#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclayer/core.hpp"
#include "fraclayer/layer_solver.hpp"
#include "fraclayer/symmetry.hpp"

namespace fraclayer {

// Flat run configuration. Keys are dotted names, values JSON texts.
// File syntax: one "key = value" per line, '#' starts a comment.
class Config {
public:
    static Config defaults();
    static Config preset(const std::string& name);
    static std::vector<std::string> preset_names();

    void set(const std::string& key, const std::string& json_value);
    void merge_text(const std::string& text);
    void merge_file(const std::string& path);

    const std::map<std::string, std::string>& entries() const { return entries_; }
    // Resolved key/value tree as JSON text.
    std::string dump() const;

    double number(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;

    SpectralMeasure measure() const;
    Potential potential() const;
    SolverConfig solver() const;
    SolverConfig energy_solver() const;
    Solve2DConfig symmetry_solver() const;

    // Builds every derived object; throws ConfigError on the first problem.
    void validate() const;

private:
    std::map<std::string, std::string> entries_;
};

// Runs one subcommand writing artifacts under out_dir.
// Returns 0 when every contract holds and 2 otherwise; throws ConfigError.
int run_command(const Config& cfg, const std::string& command, const std::string& out_dir);

std::vector<std::string> command_names();

}  // namespace fraclayer
